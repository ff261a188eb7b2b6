#include "drs/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drs {

namespace {

constexpr double kSplitSumTol = 1e-9;  // relative tolerance on sum(levels) = P

double capacity_ratio(const GaussianChannel& ch) {
    // A = 1 + MP/N
    return 1.0 + ch.num_users() * ch.common_power() / ch.noise;
}

void validate_split(const GaussianChannel& ch, const PowerSplit& split) {
    if (split.levels.empty())
        throw std::invalid_argument("power split must have at least one level");
    double sum = 0.0;
    for (double p : split.levels) {
        if (!(p > 0.0))
            throw std::invalid_argument("power split levels must be positive");
        sum += p;
    }
    const double power = ch.common_power();
    if (std::abs(sum - power) > kSplitSumTol * std::max(power, 1.0))
        throw std::invalid_argument("power split levels must sum to the user power");
}

// Equal-SIR system of n levels with per-user power Q and noise N_eff in an
// M-user channel: SIR_k = p_k / (MQ - M sum_{j<k} p_j - p_k + N_eff) equal
// for all k and sum p_k = Q. Solved by bisection on the common SIR s, using
// the forward recursion p_k = s D_k / (1+s), D_{k+1} = D_k - M p_k, under
// which the consumed power is strictly increasing in s.
struct EqualSirSolution {
    std::vector<double> levels;
    double sir = 0.0;
};

EqualSirSolution solve_equal_sir(int num_users, double power, double noise,
                                 int levels) {
    const double m = num_users;
    auto consumed = [&](double s) {
        double interference = m * power + noise;
        double sum = 0.0;
        for (int k = 0; k < levels; ++k) {
            const double p = s * interference / (1.0 + s);
            sum += p;
            interference -= m * p;
        }
        return sum;
    };

    double lo = 0.0;
    double hi;
    if (num_users > 1) {
        // beyond s = 1/(M-1) the forward recursion turns unphysical; the
        // consumed power at that endpoint already exceeds Q.
        hi = (1.0 - 1e-12) / (m - 1.0);
    } else {
        hi = 1.0;
        while (consumed(hi) < power) hi *= 2.0;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (consumed(mid) < power ? lo : hi) = mid;
    }

    EqualSirSolution out;
    out.sir = 0.5 * (lo + hi);
    double interference = m * power + noise;
    out.levels.resize(levels);
    for (int k = 0; k < levels; ++k) {
        out.levels[k] = out.sir * interference / (1.0 + out.sir);
        interference -= m * out.levels[k];
    }
    return out;
}

}  // namespace

GaussianChannel::GaussianChannel(std::vector<double> powers_, double noise_,
                                 LogBase base_)
    : powers(std::move(powers_)), noise(noise_), base(base_) {
    if (powers.empty())
        throw std::invalid_argument("channel needs at least one user");
    if (!(noise > 0.0))
        throw std::invalid_argument("noise variance must be positive");
    for (double p : powers)
        if (!(p >= 0.0))
            throw std::invalid_argument("powers must be nonnegative");
}

GaussianChannel GaussianChannel::symmetric(int num_users, double power,
                                           double noise, LogBase base) {
    if (num_users < 1)
        throw std::invalid_argument("channel needs at least one user");
    return GaussianChannel(std::vector<double>(num_users, power), noise, base);
}

double GaussianChannel::total_power() const {
    double sum = 0.0;
    for (double p : powers) sum += p;
    return sum;
}

bool GaussianChannel::is_symmetric(double rel_tol) const {
    const auto [lo, hi] = std::minmax_element(powers.begin(), powers.end());
    return *hi - *lo <= rel_tol * std::max(*hi, 1.0);
}

double GaussianChannel::common_power() const {
    if (!is_symmetric())
        throw std::invalid_argument("operation requires equal user powers");
    return powers.front();
}

double max_equal_rate(const GaussianChannel& ch) {
    const double a = capacity_ratio(ch);
    return std::log(a) / (2.0 * ch.num_users()) * unit_factor(ch.base);
}

PowerSplit optimal_split(const GaussianChannel& ch, int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const double power = ch.common_power();
    if (!(power > 0.0))
        throw std::invalid_argument("splitting requires positive power");
    const double m = ch.num_users();
    const double log_a = std::log(capacity_ratio(ch));
    const double step = std::expm1(log_a / levels);  // A^{1/L} - 1

    PowerSplit split;
    split.levels.resize(levels);
    for (int k = 1; k <= levels; ++k)
        split.levels[k - 1] =
            ch.noise / m * std::exp(log_a * (levels - k) / levels) * step;
    return split;
}

double equal_sir_value(const GaussianChannel& ch, int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const double m = ch.num_users();
    const double root = std::exp(std::log(capacity_ratio(ch)) / levels);
    return (root - 1.0) / ((m - 1.0) * root + 1.0);
}

PowerSplit recursive_split(const GaussianChannel& ch, int levels, double tol) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double power = ch.common_power();
    if (!(power > 0.0))
        throw std::invalid_argument("splitting requires positive power");
    const int m = ch.num_users();

    PowerSplit split;
    split.levels.assign(1, power);
    if (levels == 1) return split;

    // Bisection on the last level p_L. The first L-1 levels form an
    // equal-SIR subsystem with power P - p_L that additionally sees the M
    // undecoded copies of p_L as noise. The last level's SIR is increasing
    // in p_L while the subsystem SIR is decreasing, so the root is bracketed.
    const double guard = 1e-15 * power;
    double lo = guard;
    double hi = power - (levels - 1) * guard;
    auto gap = [&](double last) {
        const double sir_last = last / ((m - 1) * last + ch.noise);
        const double sub_sir =
            solve_equal_sir(m, power - last, ch.noise + m * last, levels - 1)
                .sir;
        return sir_last - sub_sir;
    };
    if (!(gap(lo) < 0.0 && gap(hi) > 0.0))
        throw std::logic_error("recursive_split: bisection bracket violated");
    while (hi - lo > tol * power && hi - lo > 4e-16 * power) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    const double last = 0.5 * (lo + hi);
    split.levels =
        solve_equal_sir(m, power - last, ch.noise + m * last, levels - 1)
            .levels;
    split.levels.push_back(last);
    return split;
}

RateAllocation rate_allocation(const GaussianChannel& ch,
                               const PowerSplit& split) {
    validate_split(ch, split);
    const double m = ch.num_users();
    const double power = ch.common_power();
    const double unit = unit_factor(ch.base);

    RateAllocation alloc;
    alloc.rates.reserve(split.levels.size());
    alloc.sirs.reserve(split.levels.size());
    double consumed = 0.0;
    for (double p : split.levels) {
        const double denom = m * (power - consumed) - p + ch.noise;
        if (!(denom > 0.0))
            throw std::logic_error("rate_allocation: interference became nonpositive");
        const double sir = p / denom;
        alloc.sirs.push_back(sir);
        alloc.rates.push_back(0.5 * std::log1p(sir) * unit);
        alloc.total += alloc.rates.back();
        consumed += p;
    }
    return alloc;
}

PowerSplit split_last(const GaussianChannel& ch, const PowerSplit& split) {
    validate_split(ch, split);
    const double m = ch.num_users();
    const double last = split.levels.back();

    // Unique equal-SIR division of the last level: with A' = M p_L + N and
    // c = p_L, the first part is (A' - sqrt(A' (A' - cM))) / M.
    const double a = m * last + ch.noise;
    const double first = (a - std::sqrt(a * ch.noise)) / m;

    PowerSplit refined = split;
    refined.levels.back() = first;
    refined.levels.push_back(last - first);

    if (!(rate_allocation(ch, refined).total >
          rate_allocation(ch, split).total - 1e-15))
        throw std::logic_error("split_last: refinement failed to improve total");
    return refined;
}

std::vector<ConvergenceRecord> error_curve(const GaussianChannel& ch,
                                           int max_levels) {
    if (max_levels < 1) throw std::invalid_argument("max_levels must be >= 1");
    const double m = ch.num_users();
    const double log_a = std::log(capacity_ratio(ch));
    const double target = max_equal_rate(ch);
    const double unit = unit_factor(ch.base);

    std::vector<ConvergenceRecord> records;
    records.reserve(max_levels);
    for (int levels = 1; levels <= max_levels; ++levels) {
        // total = (L/2) log(M / (M - 1 + A^{-1/L})), written to stay accurate
        // when A^{-1/L} is close to 1.
        const double achieved =
            -0.5 * levels * std::log1p(std::expm1(-log_a / levels) / m) * unit;
        ConvergenceRecord rec;
        rec.levels = levels;
        rec.achieved = achieved;
        rec.target = target;
        rec.error = target - achieved;
        rec.scaled_error = levels * rec.error;
        records.push_back(rec);
    }
    return records;
}

double convergence_limit_constant(const GaussianChannel& ch) {
    const double m = ch.num_users();
    const double log_a = std::log(capacity_ratio(ch));
    return (m - 1.0) * log_a * log_a / (4.0 * m * m) * unit_factor(ch.base);
}

PowerSplit uniform_split(const GaussianChannel& ch, int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const double power = ch.common_power();
    if (!(power > 0.0))
        throw std::invalid_argument("splitting requires positive power");
    PowerSplit split;
    split.levels.assign(levels, power / levels);
    return split;
}

std::vector<double> split_family_totals(const GaussianChannel& ch,
                                        const SplitFamily& family,
                                        int max_levels) {
    if (max_levels < 1) throw std::invalid_argument("max_levels must be >= 1");
    std::vector<double> totals;
    totals.reserve(max_levels);
    for (int levels = 1; levels <= max_levels; ++levels) {
        const PowerSplit split = family(levels);
        validate_split(ch, split);  // rejects families not exhausting P
        totals.push_back(rate_allocation(ch, split).total);
    }
    return totals;
}

std::vector<double> asymmetric_fractions(const GaussianChannel& ch,
                                         int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const double total = ch.total_power();
    if (!(total > 0.0))
        throw std::invalid_argument("splitting requires positive power");
    const double log_b = std::log1p(total / ch.noise);
    const double step = std::expm1(log_b / levels);

    std::vector<double> fractions(levels);
    for (int k = 1; k <= levels; ++k)
        fractions[k - 1] =
            ch.noise / total * std::exp(log_b * (levels - k) / levels) * step;
    return fractions;
}

std::vector<PowerSplit> asymmetric_split(const GaussianChannel& ch,
                                         int levels) {
    const std::vector<double> fractions = asymmetric_fractions(ch, levels);
    std::vector<PowerSplit> splits;
    splits.reserve(ch.powers.size());
    for (int i = 0; i < ch.num_users(); ++i) {
        PowerSplit split;
        split.owner = i + 1;
        split.levels.resize(levels);
        for (int k = 0; k < levels; ++k)
            split.levels[k] = fractions[k] * ch.powers[i];
        splits.push_back(std::move(split));
    }
    return splits;
}

std::vector<double> asymmetric_limit_rates(const GaussianChannel& ch) {
    const double total = ch.total_power();
    if (total == 0.0) return std::vector<double>(ch.powers.size(), 0.0);
    const double sum_rate = 0.5 * std::log1p(total / ch.noise);
    std::vector<double> rates;
    rates.reserve(ch.powers.size());
    for (double p : ch.powers)
        rates.push_back(p / total * sum_rate * unit_factor(ch.base));
    return rates;
}

}  // namespace drs
