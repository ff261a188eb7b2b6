#pragma once

#include <functional>
#include <vector>

#include "drs/common.hpp"

namespace drs {

// M-user additive white Gaussian noise multiple-access channel.
// Each user i transmits with power powers[i] (watts) and the receiver sees
// noise variance `noise` (watts). The symmetric case has all powers equal.
struct GaussianChannel {
    std::vector<double> powers;
    double noise = 1.0;
    LogBase base = LogBase::nat;

    GaussianChannel(std::vector<double> powers, double noise,
                    LogBase base = LogBase::nat);

    static GaussianChannel symmetric(int num_users, double power, double noise,
                                     LogBase base = LogBase::nat);

    int num_users() const { return static_cast<int>(powers.size()); }
    double total_power() const;
    bool is_symmetric(double rel_tol = 1e-12) const;

    // Common per-user power; throws std::invalid_argument if powers differ.
    double common_power() const;
};

// Per-user power split into L levels, decoded in order. Levels are absolute
// powers in watts and must sum to the owner's transmit power.
struct PowerSplit {
    int owner = 1;  // 1-based real-user id
    std::vector<double> levels;

    int size() const { return static_cast<int>(levels.size()); }
};

struct RateAllocation {
    std::vector<double> rates;  // per level, in the channel's unit
    std::vector<double> sirs;   // signal-to-interference-plus-noise ratios
    double total = 0.0;
};

struct ConvergenceRecord {
    int levels = 0;
    double achieved = 0.0;      // total rate at this L
    double target = 0.0;        // maximum equal rate
    double error = 0.0;         // target - achieved
    double scaled_error = 0.0;  // levels * error
};

// Maximum common rate (1/2M) log(1 + MP/N). Requires symmetric powers.
double max_equal_rate(const GaussianChannel& ch);

// Throughput-maximizing split of one user's power into `levels` virtual
// users: p_k = (N/M) A^{(L-k)/L} (A^{1/L} - 1) with A = 1 + MP/N.
PowerSplit optimal_split(const GaussianChannel& ch, int levels);

// Same split found without the closed form: bisection on the last level,
// with the remaining (L-1)-level subsystem solved for its common SIR. Each
// level is accurate to `tol` (relative to P).
PowerSplit recursive_split(const GaussianChannel& ch, int levels, double tol);

// Rates and SIRs of an arbitrary split under class-by-class successive
// decoding: r_k = 1/2 log(1 + p_k / (MP - M sum_{j<k} p_j - p_k + N)).
RateAllocation rate_allocation(const GaussianChannel& ch,
                               const PowerSplit& split);

// Splits the last level in two at the unique equal-SIR point, keeping all
// other levels. The resulting (L+1)-level split has strictly higher total.
PowerSplit split_last(const GaussianChannel& ch, const PowerSplit& split);

// Achieved totals and errors of the optimal split for L = 1..max_levels.
std::vector<ConvergenceRecord> error_curve(const GaussianChannel& ch,
                                           int max_levels);

// Limit of L * (R* - achieved[L]): (M-1) (log A)^2 / (4 M^2).
double convergence_limit_constant(const GaussianChannel& ch);

// Common SIR of the optimal split: (A^{1/L} - 1) / ((M-1) A^{1/L} + 1).
double equal_sir_value(const GaussianChannel& ch, int levels);

PowerSplit uniform_split(const GaussianChannel& ch, int levels);

// A rule assigning a power split to every L.
using SplitFamily = std::function<PowerSplit(int levels)>;

// Totals achieved by a split family for L = 1..max_levels. Rejects families
// whose splits do not exhaust the user's power.
std::vector<double> split_family_totals(const GaussianChannel& ch,
                                        const SplitFamily& family,
                                        int max_levels);

// Common split fractions for unequal powers: every user splits by the same
// gamma_k, computed with the total power sum in place of MP.
std::vector<double> asymmetric_fractions(const GaussianChannel& ch, int levels);

// Per-user splits gamma_k * P_i, one PowerSplit per user.
std::vector<PowerSplit> asymmetric_split(const GaussianChannel& ch, int levels);

// Limiting per-user rates P_i / (2 sum P) log(1 + sum P / N); the rate tuple
// lies on the dominant face with R_i / R_j = P_i / P_j.
std::vector<double> asymmetric_limit_rates(const GaussianChannel& ch);

}  // namespace drs
