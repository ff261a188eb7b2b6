#include "drs/dmc_protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>

namespace drs {

namespace {

constexpr double kSlackTol = -1e-12;
constexpr double kSymmetryTol = 1e-9;

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace

SwitchSystem build_switch_system(const DmcChannel& ch,
                                 const std::vector<int>& counts) {
    if (static_cast<int>(counts.size()) != ch.num_users())
        throw std::invalid_argument("one virtual-user count per real user required");
    for (int c : counts)
        if (c < 1) throw std::invalid_argument("counts must be >= 1");
    if (!check_assumptions(ch, kSymmetryTol).symmetric)
        throw std::invalid_argument(
            "unequal virtual-user counts require a symmetric channel");

    const int m = ch.num_users();
    MutualInfoTable table(ch);
    const double limit = table.joint_total() / m;

    SwitchSystem sys;
    sys.counts = counts;
    sys.rates.resize(m);
    for (int i = 0; i < m; ++i) {
        const int levels = counts[i];
        sys.rates[i].resize(levels);
        double total = 0.0;
        for (int k = 1; k <= levels; ++k) {
            const double before = static_cast<double>(k - 1) / levels;
            double mix = 0.0;
            for (int l = 0; l < m; ++l)
                mix += binomial(m - 1, l) * std::pow(before, l) *
                       std::pow(1.0 - before, m - 1 - l) * table.chain(l);
            sys.rates[i][k - 1] = mix / levels;
            total += sys.rates[i][k - 1];
        }
        if (total > limit + 1e-12)
            throw std::logic_error("switch system exceeds the per-user limit");
    }
    return sys;
}

DecodingSchedule min_progress_schedule(const SwitchSystem& sys) {
    const int m = static_cast<int>(sys.counts.size());

    DecodingSchedule schedule;
    std::vector<std::int64_t> done(m, 0);  // decoded virtual users per owner
    for (int i = 0; i < m; ++i) {
        schedule.order.push_back({i + 1, 1});
        done[i] = 1;
    }
    // progress of owner i is done[i] / counts[i]; compare exactly via
    // cross-multiplication so equal fractions tie deterministically.
    for (;;) {
        int pick = -1;
        for (int i = 0; i < m; ++i) {
            if (done[i] >= sys.counts[i]) continue;
            if (pick < 0 ||
                done[i] * sys.counts[pick] < done[pick] * sys.counts[i])
                pick = i;
        }
        if (pick < 0) break;
        ++done[pick];
        schedule.order.push_back({pick + 1, static_cast<int>(done[pick])});
    }
    return schedule;
}

DmcVerificationReport verify_schedule(const DmcChannel& ch,
                                      const SwitchSystem& sys,
                                      const DecodingSchedule& schedule) {
    DmcVerificationReport report;
    const int m = ch.num_users();
    if (static_cast<int>(sys.counts.size()) != m) {
        report.error = "switch system does not match the channel";
        return report;
    }

    size_t expected = 0;
    for (int c : sys.counts) expected += c;
    if (schedule.order.size() != expected) {
        report.error = "schedule does not cover every virtual user exactly once";
        return report;
    }
    std::set<std::pair<int, int>> seen;
    std::vector<int> last_index(m, 0);
    for (const UserRef& ref : schedule.order) {
        if (ref.owner < 1 || ref.owner > m || ref.index < 1 ||
            ref.index > sys.counts[ref.owner - 1]) {
            report.error = "schedule names an unknown virtual user";
            return report;
        }
        if (!seen.insert({ref.owner, ref.index}).second) {
            report.error = "schedule repeats a virtual user";
            return report;
        }
        if (ref.index <= last_index[ref.owner - 1]) {
            report.error = "schedule decodes an owner's levels out of order";
            return report;
        }
        last_index[ref.owner - 1] = ref.index;
    }

    MutualInfoTable table(ch);
    const Subset full = (1u << m) - 1u;
    report.min_slack = std::numeric_limits<double>::infinity();
    std::vector<int> decoded(m, 0);
    for (const UserRef& ref : schedule.order) {
        const int i = ref.owner - 1;
        const int levels = sys.counts[i];

        // Probability that user j's active input is already decoded: its
        // switch landed on one of the decoded_j positions out of L_j.
        std::vector<double> known(m, 0.0);
        if (ref.index > 1)
            for (int j = 0; j < m; ++j)
                known[j] = static_cast<double>(decoded[j]) / sys.counts[j];

        const Subset others = full & ~(1u << i);
        double mix = 0.0;
        for (Subset s = others;; s = (s - 1) & others) {
            double weight = 1.0;
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                weight *= (s & (1u << j)) ? known[j] : 1.0 - known[j];
            }
            if (weight > 0.0) mix += weight * table.single_given(ref.owner, s);
            if (s == 0) break;
        }

        DmcScheduleStep step;
        step.who = ref;
        step.mutual_info = mix / levels;
        step.rate = sys.rates[i][ref.index - 1];
        step.slack = step.mutual_info - step.rate;
        if (step.slack < report.min_slack) report.min_slack = step.slack;
        if (step.slack < kSlackTol && report.first_violation < 0)
            report.first_violation = static_cast<int>(report.steps.size());
        report.steps.push_back(step);
        ++decoded[i];
    }
    report.ok = report.first_violation < 0;
    return report;
}

}  // namespace drs
