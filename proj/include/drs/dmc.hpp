#pragma once

#include <vector>

#include "drs/common.hpp"

namespace drs {

// M-user discrete memoryless multiple-access channel: per-user input
// alphabets, one output alphabet and a stochastic matrix W(y | x_1..x_M).
// Inputs are independent with the given per-user distributions.
//
// `transition` has one row per input tuple in row-major order (x_1 slowest,
// x_M fastest); each row is a probability vector over the output alphabet.
struct DmcChannel {
    std::vector<int> alphabet_sizes;
    int output_size = 0;
    std::vector<std::vector<double>> transition;
    std::vector<std::vector<double>> inputs;
    LogBase base = LogBase::nat;

    DmcChannel(std::vector<int> alphabet_sizes, int output_size,
               std::vector<std::vector<double>> transition,
               std::vector<std::vector<double>> inputs,
               LogBase base = LogBase::nat);

    int num_users() const { return static_cast<int>(alphabet_sizes.size()); }
    int input_tuple_count() const;
};

// User subsets as bitmasks: bit i set means user i+1 is in the subset.
using Subset = unsigned;

// I(X_S; Y, X_T) for disjoint subsets S, T, by exact summation over the
// joint distribution. Conditional forms follow from the independence of the
// inputs: I(X_S; Y | X_T) = I(X_S; Y, X_T).
double mutual_information(const DmcChannel& ch, Subset target, Subset given);

// All mutual-information values the rate rules draw on, computed once.
class MutualInfoTable {
  public:
    explicit MutualInfoTable(const DmcChannel& ch);

    int num_users() const { return num_users_; }
    // I(X_i; Y, X_S) for S a subset of the other users (1-based user id).
    double single_given(int user, Subset others) const;
    // I(X_1; Y, X_2, ..., X_{l+1}): the representative value with l of the
    // other users known.
    double chain(int known) const { return chain_[known]; }
    // I(X_1, ..., X_M; Y).
    double joint_total() const { return joint_total_; }
    // I(X_S; Y | X_{S^c}).
    double conditional(Subset s) const;

  private:
    int num_users_;
    std::vector<std::vector<double>> single_given_;  // [user][others mask]
    std::vector<double> chain_;
    std::vector<double> conditional_;  // [mask]
    double joint_total_ = 0.0;
};

struct AssumptionReport {
    bool symmetric = false;   // conditional MI depends only on |S|
    bool strict_gain = false; // I(X_S;Y) < I(X_S;Y|X_T) for disjoint S, T
    double max_symmetry_deviation = 0.0;
    double min_gain_margin = 0.0;
};

AssumptionReport check_assumptions(const DmcChannel& ch, double tol);

// Distribution of the random switch positions, shared by every user.
struct SwitchDistribution {
    std::vector<double> weights;  // lambda_1..lambda_L, sums to 1

    int size() const { return static_cast<int>(weights.size()); }
};

SwitchDistribution uniform_switch(int levels);

// Per-virtual-user rates of real user `user` (1-based) when all users run
// the same switch. On symmetric channels this is the binomial mixture
//   r_k = lambda_k sum_l C(M-1,l) beta^l (1-beta)^{M-1-l} I(X_1;Y,X_2..X_{l+1})
// with beta = sum_{j<k} lambda_j; otherwise the subset-weighted form below
// is used.
std::vector<double> switch_rates(const DmcChannel& ch,
                                 const SwitchDistribution& sw, int user);

// Subset-weighted form, valid with or without the symmetry condition:
//   r_k = lambda_k sum_{S subset of others} beta^|S| (1-beta)^{M-1-|S|} I(X_i;Y,X_S).
std::vector<double> switch_rates_subset_weighted(const DmcChannel& ch,
                                                 const SwitchDistribution& sw,
                                                 int user);

// Limiting per-user rates as the largest switch weight tends to zero:
// (1/M) I(X_1..X_M;Y) under symmetry, the subset-averaged sum otherwise.
std::vector<double> limit_rates(const DmcChannel& ch);

// Exact gap to the limit for two users with the uniform switch:
//   e[L] = (1/2L) (I(X_1;Y,X_2) - I(X_1;Y)).
double two_user_error_term(const DmcChannel& ch, int levels);

// Upper bound M alpha / L on the uniform-switch error, with
// alpha = max_i C(M-1,i) (i/(M-1))^i (1-i/(M-1))^{M-1-i} I(X_1;Y,X_2..X_{i+1}).
double uniform_switch_bound(const DmcChannel& ch, int levels);

// Achieved per-user total under the uniform switch (for error measurement).
double uniform_switch_total(const DmcChannel& ch, int levels);

// Mixture coefficients c_i multiplying I(X_1;Y,X_2..X_{i+1}) in the total
// rate of one user; each tends to 1/M as the switch weights vanish.
std::vector<double> mixture_coefficients(const SwitchDistribution& sw,
                                         int num_users);

}  // namespace drs
