#include "drs/dmc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drs {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kProbFloor = 1e-300;  // below this a probability is zero
constexpr double kSymmetryTol = 1e-9;

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

void check_user(const DmcChannel& ch, int user) {
    if (user < 1 || user > ch.num_users())
        throw std::invalid_argument("user id out of range");
}

void check_switch(const SwitchDistribution& sw) {
    if (sw.weights.empty())
        throw std::invalid_argument("switch needs at least one weight");
    double sum = 0.0;
    for (double w : sw.weights) {
        if (!(w >= 0.0))
            throw std::invalid_argument("switch weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kProbTol)
        throw std::invalid_argument("switch weights must sum to 1");
}

// Mixed-radix index of the symbols of `mask`'s users (ascending user order).
int project(const std::vector<int>& symbols, const std::vector<int>& sizes,
            Subset mask) {
    int idx = 0;
    for (size_t i = 0; i < symbols.size(); ++i)
        if (mask & (1u << i)) idx = idx * sizes[i] + symbols[i];
    return idx;
}

int space_size(const std::vector<int>& sizes, Subset mask) {
    int n = 1;
    for (size_t i = 0; i < sizes.size(); ++i)
        if (mask & (1u << i)) n *= sizes[i];
    return n;
}

bool advance(std::vector<int>& symbols, const std::vector<int>& sizes) {
    for (int i = static_cast<int>(symbols.size()) - 1; i >= 0; --i) {
        if (++symbols[i] < sizes[i]) return true;
        symbols[i] = 0;
    }
    return false;
}

// Joint distribution of (X_target, (Y, X_given)) flattened to a matrix of
// a_size rows and b_size columns.
struct ProjectedJoint {
    std::vector<double> cells;
    int a_size = 1;
    int b_size = 1;
};

ProjectedJoint project_joint(const DmcChannel& ch, Subset target,
                             Subset given) {
    ProjectedJoint joint;
    joint.a_size = space_size(ch.alphabet_sizes, target);
    joint.b_size = space_size(ch.alphabet_sizes, given) * ch.output_size;
    joint.cells.assign(static_cast<size_t>(joint.a_size) * joint.b_size, 0.0);

    std::vector<int> x(ch.num_users(), 0);
    int row = 0;
    do {
        double px = 1.0;
        for (int i = 0; i < ch.num_users(); ++i) px *= ch.inputs[i][x[i]];
        if (px > kProbFloor) {
            const int a = project(x, ch.alphabet_sizes, target);
            const int g = project(x, ch.alphabet_sizes, given);
            double* cell =
                &joint.cells[static_cast<size_t>(a) * joint.b_size +
                             static_cast<size_t>(g) * ch.output_size];
            for (int y = 0; y < ch.output_size; ++y)
                cell[y] += px * ch.transition[row][y];
        }
        ++row;
    } while (advance(x, ch.alphabet_sizes));
    return joint;
}

double mutual_information_nats(const DmcChannel& ch, Subset target,
                               Subset given) {
    if (target == 0) return 0.0;
    const ProjectedJoint joint = project_joint(ch, target, given);

    std::vector<double> pa(joint.a_size, 0.0);
    std::vector<double> pb(joint.b_size, 0.0);
    for (int a = 0; a < joint.a_size; ++a)
        for (int b = 0; b < joint.b_size; ++b) {
            const double p = joint.cells[static_cast<size_t>(a) * joint.b_size + b];
            pa[a] += p;
            pb[b] += p;
        }

    double info = 0.0;
    for (int a = 0; a < joint.a_size; ++a)
        for (int b = 0; b < joint.b_size; ++b) {
            const double p = joint.cells[static_cast<size_t>(a) * joint.b_size + b];
            if (p > kProbFloor) info += p * std::log(p / (pa[a] * pb[b]));
        }
    return info;
}

bool symmetry_holds(const DmcChannel& ch, double tol, double* worst = nullptr) {
    const int m = ch.num_users();
    const Subset full = (1u << m) - 1u;
    std::vector<double> reference(m + 1, -1.0);
    double deviation = 0.0;
    for (Subset s = 1; s <= full; ++s) {
        const int size = std::popcount(s);
        const double value = mutual_information_nats(ch, s, full & ~s);
        if (reference[size] < 0.0)
            reference[size] = value;
        else
            deviation = std::max(deviation, std::abs(value - reference[size]));
    }
    if (worst) *worst = deviation;
    return deviation <= tol;
}

// Per-virtual-user rates with the caller choosing how the interference mix
// is expanded. `info_for_mask` maps a subset of the other users (as a mask
// with user i's bit cleared) to I(X_i; Y, X_S).
template <typename InfoFn>
std::vector<double> rates_from_switch(const DmcChannel& ch,
                                      const SwitchDistribution& sw, int user,
                                      InfoFn&& info_for_mask) {
    const int m = ch.num_users();
    const Subset full = (1u << m) - 1u;
    const Subset self = 1u << (user - 1);

    std::vector<double> rates(sw.weights.size(), 0.0);
    double before = 0.0;  // beta_{k-1}
    for (int k = 0; k < sw.size(); ++k) {
        const double lambda = sw.weights[k];
        double mix = 0.0;
        const Subset others = full & ~self;
        for (Subset s = others;; s = (s - 1) & others) {
            const int known = std::popcount(s);
            mix += std::pow(before, known) *
                   std::pow(1.0 - before, m - 1 - known) * info_for_mask(s);
            if (s == 0) break;
        }
        rates[k] = lambda * mix;
        before += lambda;
    }
    return rates;
}

}  // namespace

DmcChannel::DmcChannel(std::vector<int> alphabet_sizes_, int output_size_,
                       std::vector<std::vector<double>> transition_,
                       std::vector<std::vector<double>> inputs_, LogBase base_)
    : alphabet_sizes(std::move(alphabet_sizes_)),
      output_size(output_size_),
      transition(std::move(transition_)),
      inputs(std::move(inputs_)),
      base(base_) {
    if (alphabet_sizes.empty())
        throw std::invalid_argument("channel needs at least one user");
    if (alphabet_sizes.size() > 16)
        throw std::invalid_argument("at most 16 users supported");
    for (int a : alphabet_sizes)
        if (a < 1) throw std::invalid_argument("alphabet sizes must be >= 1");
    if (output_size < 1)
        throw std::invalid_argument("output alphabet must be nonempty");
    if (static_cast<int>(transition.size()) != input_tuple_count())
        throw std::invalid_argument("transition matrix needs one row per input tuple");
    for (const auto& row : transition) {
        if (static_cast<int>(row.size()) != output_size)
            throw std::invalid_argument("transition row length must match output alphabet");
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0 + kProbTol))
                throw std::invalid_argument("transition probabilities must be in [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbTol)
            throw std::invalid_argument("transition rows must sum to 1");
    }
    if (inputs.size() != alphabet_sizes.size())
        throw std::invalid_argument("one input distribution per user required");
    for (size_t i = 0; i < inputs.size(); ++i) {
        if (static_cast<int>(inputs[i].size()) != alphabet_sizes[i])
            throw std::invalid_argument("input distribution length must match alphabet");
        double sum = 0.0;
        for (double p : inputs[i]) {
            if (!(p >= 0.0 && p <= 1.0 + kProbTol))
                throw std::invalid_argument("input probabilities must be in [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbTol)
            throw std::invalid_argument("input distributions must sum to 1");
    }
}

int DmcChannel::input_tuple_count() const {
    int n = 1;
    for (int a : alphabet_sizes) n *= a;
    return n;
}

double mutual_information(const DmcChannel& ch, Subset target, Subset given) {
    const Subset full = (1u << ch.num_users()) - 1u;
    if ((target | given) & ~full)
        throw std::invalid_argument("subset references an unknown user");
    if (target & given)
        throw std::invalid_argument("target and given subsets must be disjoint");
    return mutual_information_nats(ch, target, given) * unit_factor(ch.base);
}

MutualInfoTable::MutualInfoTable(const DmcChannel& ch)
    : num_users_(ch.num_users()) {
    const int m = num_users_;
    const Subset full = (1u << m) - 1u;
    const double unit = unit_factor(ch.base);

    single_given_.assign(m, std::vector<double>(1u << m, 0.0));
    for (int i = 0; i < m; ++i) {
        const Subset self = 1u << i;
        const Subset others = full & ~self;
        for (Subset s = others;; s = (s - 1) & others) {
            single_given_[i][s] = mutual_information_nats(ch, self, s) * unit;
            if (s == 0) break;
        }
    }

    chain_.resize(m);
    for (int known = 0; known < m; ++known)
        chain_[known] = single_given_[0][((1u << (known + 1)) - 1u) & ~1u];

    conditional_.assign((1u << m), 0.0);
    for (Subset s = 1; s <= full; ++s)
        conditional_[s] = mutual_information_nats(ch, s, full & ~s) * unit;
    joint_total_ = conditional_[full];
}

double MutualInfoTable::single_given(int user, Subset others) const {
    if (user < 1 || user > num_users_)
        throw std::invalid_argument("user id out of range");
    if (others & (1u << (user - 1)))
        throw std::invalid_argument("subset must exclude the user itself");
    return single_given_[user - 1][others];
}

double MutualInfoTable::conditional(Subset s) const {
    if (s == 0 || s >= conditional_.size())
        throw std::invalid_argument("subset out of range");
    return conditional_[s];
}

AssumptionReport check_assumptions(const DmcChannel& ch, double tol) {
    AssumptionReport report;
    report.symmetric = symmetry_holds(ch, tol, &report.max_symmetry_deviation);

    const int m = ch.num_users();
    const Subset full = (1u << m) - 1u;
    report.min_gain_margin = std::numeric_limits<double>::infinity();
    for (Subset s = 1; s <= full; ++s) {
        const Subset rest = full & ~s;
        if (rest == 0) continue;
        const double base_info = mutual_information_nats(ch, s, 0);
        for (Subset t = rest;; t = (t - 1) & rest) {
            if (t != 0) {
                const double margin =
                    mutual_information_nats(ch, s, t) - base_info;
                report.min_gain_margin =
                    std::min(report.min_gain_margin, margin);
            }
            if (t == 0) break;
        }
    }
    if (m == 1) report.min_gain_margin = 0.0;  // no disjoint pairs exist
    report.strict_gain = m == 1 || report.min_gain_margin > tol;
    return report;
}

SwitchDistribution uniform_switch(int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    SwitchDistribution sw;
    sw.weights.assign(levels, 1.0 / levels);
    return sw;
}

std::vector<double> switch_rates(const DmcChannel& ch,
                                 const SwitchDistribution& sw, int user) {
    check_user(ch, user);
    check_switch(sw);
    if (symmetry_holds(ch, kSymmetryTol)) {
        // Binomial mixture over the representative chain values: with all
        // interference sets of the same size carrying the same information,
        // only the count of already-switched users matters.
        MutualInfoTable table(ch);
        const int m = ch.num_users();
        std::vector<double> rates(sw.weights.size(), 0.0);
        double before = 0.0;
        for (int k = 0; k < sw.size(); ++k) {
            double mix = 0.0;
            for (int l = 0; l < m; ++l)
                mix += binomial(m - 1, l) * std::pow(before, l) *
                       std::pow(1.0 - before, m - 1 - l) * table.chain(l);
            rates[k] = sw.weights[k] * mix;
            before += sw.weights[k];
        }
        return rates;
    }
    return switch_rates_subset_weighted(ch, sw, user);
}

std::vector<double> switch_rates_subset_weighted(const DmcChannel& ch,
                                                 const SwitchDistribution& sw,
                                                 int user) {
    check_user(ch, user);
    check_switch(sw);
    MutualInfoTable table(ch);
    return rates_from_switch(ch, sw, user,
                             [&](Subset s) { return table.single_given(user, s); });
}

std::vector<double> limit_rates(const DmcChannel& ch) {
    const AssumptionReport assumptions = check_assumptions(ch, kSymmetryTol);
    if (!assumptions.strict_gain)
        throw std::invalid_argument(
            "limit rates require conditioning to strictly increase information");

    const int m = ch.num_users();
    MutualInfoTable table(ch);
    if (assumptions.symmetric)
        return std::vector<double>(m, table.joint_total() / m);

    const Subset full = (1u << m) - 1u;
    std::vector<double> rates(m, 0.0);
    for (int i = 1; i <= m; ++i) {
        const Subset others = full & ~(1u << (i - 1));
        double sum = table.single_given(i, 0) / m;
        for (Subset s = others; s != 0; s = (s - 1) & others) {
            const int size = std::popcount(s);
            sum += table.single_given(i, s) / (m * binomial(m - 1, size));
        }
        rates[i - 1] = sum;
    }
    return rates;
}

double two_user_error_term(const DmcChannel& ch, int levels) {
    if (ch.num_users() != 2)
        throw std::invalid_argument("error term is defined for two users");
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    MutualInfoTable table(ch);
    return (table.chain(1) - table.chain(0)) / (2.0 * levels);
}

double uniform_switch_bound(const DmcChannel& ch, int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const int m = ch.num_users();
    MutualInfoTable table(ch);
    double alpha = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = m > 1 ? static_cast<double>(i) / (m - 1) : 0.0;
        alpha = std::max(alpha, binomial(m - 1, i) * std::pow(x, i) *
                                    std::pow(1.0 - x, m - 1 - i) *
                                    table.chain(i));
    }
    return m * alpha / levels;
}

double uniform_switch_total(const DmcChannel& ch, int levels) {
    const std::vector<double> rates =
        switch_rates(ch, uniform_switch(levels), 1);
    double total = 0.0;
    for (double r : rates) total += r;
    return total;
}

std::vector<double> mixture_coefficients(const SwitchDistribution& sw,
                                         int num_users) {
    check_switch(sw);
    if (num_users < 1) throw std::invalid_argument("need at least one user");
    std::vector<double> coeffs(num_users, 0.0);
    double before = 0.0;
    for (double lambda : sw.weights) {
        for (int i = 0; i < num_users; ++i)
            coeffs[i] += lambda * binomial(num_users - 1, i) *
                         std::pow(before, i) *
                         std::pow(1.0 - before, num_users - 1 - i);
        before += lambda;
    }
    return coeffs;
}

}  // namespace drs
