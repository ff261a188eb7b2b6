#include "drs/gaussian_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace drs {

namespace {

constexpr double kSlackTol = -1e-12;

}  // namespace

std::vector<VirtualUser> build_virtual_users(const GaussianChannel& ch,
                                             const std::vector<int>& counts) {
    if (static_cast<int>(counts.size()) != ch.num_users())
        throw std::invalid_argument("one virtual-user count per real user required");
    for (int c : counts)
        if (c < 1) throw std::invalid_argument("counts must be >= 1");
    ch.common_power();  // the construction assumes equal powers

    std::vector<VirtualUser> users;
    for (int i = 0; i < ch.num_users(); ++i) {
        const PowerSplit split = optimal_split(ch, counts[i]);
        const RateAllocation alloc = rate_allocation(ch, split);
        for (int k = 0; k < counts[i]; ++k)
            users.push_back({i + 1, k + 1, split.levels[k], alloc.rates[k]});
    }
    return users;
}

DecodingSchedule min_power_schedule(const std::vector<VirtualUser>& users,
                                    const GaussianChannel& ch) {
    const int num_users = ch.num_users();
    // levels[i][k-1] = power of virtual user (i+1, k)
    std::vector<std::vector<double>> levels(num_users);
    for (const VirtualUser& vu : users) {
        auto& own = levels[vu.owner - 1];
        if (static_cast<int>(own.size()) < vu.index) own.resize(vu.index);
        own[vu.index - 1] = vu.power;
    }

    for (const auto& own : levels)
        if (own.empty())
            throw std::invalid_argument("every real user needs at least one virtual user");

    DecodingSchedule schedule;
    schedule.order.reserve(users.size());

    std::vector<double> decoded(num_users, 0.0);
    std::vector<int> next(num_users, 1);  // next undecoded index, 1-based
    for (int i = 0; i < num_users; ++i) {
        schedule.order.push_back({i + 1, 1});
        decoded[i] = levels[i][0];
        next[i] = 2;
    }
    for (;;) {
        int pick = -1;
        for (int i = 0; i < num_users; ++i) {
            if (next[i] > static_cast<int>(levels[i].size())) continue;
            if (pick < 0 || decoded[i] < decoded[pick]) pick = i;
        }
        if (pick < 0) break;
        schedule.order.push_back({pick + 1, next[pick]});
        decoded[pick] += levels[pick][next[pick] - 1];
        ++next[pick];
    }
    return schedule;
}

VerificationReport verify_schedule(const std::vector<VirtualUser>& users,
                                   const DecodingSchedule& schedule,
                                   const GaussianChannel& ch) {
    VerificationReport report;

    std::map<std::pair<int, int>, const VirtualUser*> by_id;
    for (const VirtualUser& vu : users) by_id[{vu.owner, vu.index}] = &vu;

    if (schedule.order.size() != users.size()) {
        report.error = "schedule does not cover every virtual user exactly once";
        return report;
    }
    std::map<std::pair<int, int>, int> seen;
    std::map<int, int> last_index;
    for (const UserRef& ref : schedule.order) {
        if (!by_id.count({ref.owner, ref.index})) {
            report.error = "schedule names an unknown virtual user";
            return report;
        }
        if (seen[{ref.owner, ref.index}]++) {
            report.error = "schedule repeats a virtual user";
            return report;
        }
        auto it = last_index.find(ref.owner);
        if (it != last_index.end() && ref.index <= it->second) {
            report.error = "schedule decodes an owner's levels out of order";
            return report;
        }
        last_index[ref.owner] = ref.index;
    }

    const double m = ch.num_users();
    const double power = ch.common_power();

    // own_below[(i,k)] = power of user i's levels before k, fixed by the
    // allocation rather than by the schedule.
    std::map<std::pair<int, int>, double> own_below;
    {
        std::map<int, std::vector<const VirtualUser*>> grouped;
        for (const VirtualUser& vu : users)
            grouped[vu.owner].push_back(&vu);
        for (auto& [owner, list] : grouped) {
            std::sort(list.begin(), list.end(),
                      [](auto* a, auto* b) { return a->index < b->index; });
            double below = 0.0;
            for (const VirtualUser* vu : list) {
                own_below[{owner, vu->index}] = below;
                below += vu->power;
            }
        }
    }

    report.min_slack = std::numeric_limits<double>::infinity();
    double decoded = 0.0;
    for (const UserRef& ref : schedule.order) {
        const VirtualUser& vu = *by_id[{ref.owner, ref.index}];
        ScheduleStep step;
        step.who = ref;
        step.tolerance =
            m * (power - own_below[{ref.owner, ref.index}]) - vu.power + ch.noise;
        // Index-1 users tolerate all interference, so they verify against an
        // empty decoded set no matter where the schedule places them.
        const double subtracted = ref.index == 1 ? 0.0 : decoded;
        step.actual = m * power - subtracted - vu.power + ch.noise;
        step.slack = step.tolerance - step.actual;
        if (step.slack < report.min_slack) report.min_slack = step.slack;
        if (step.slack < kSlackTol && report.first_violation < 0)
            report.first_violation = static_cast<int>(report.steps.size());
        report.steps.push_back(step);
        decoded += vu.power;
    }
    report.ok = report.first_violation < 0;
    return report;
}

}  // namespace drs
