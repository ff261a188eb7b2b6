#pragma once

#include <vector>

#include "drs/dmc.hpp"
#include "drs/gaussian.hpp"
#include "drs/schedule.hpp"

namespace drs {

// Brute-force references. Everything here recomputes quantities the library
// obtains in closed form, through an unrelated route, so the two can be
// compared in tests.

// Exhaustive simplex search for the throughput-maximizing split of 2 or 3
// levels. `resolution` is the absolute grid step in watts and must be at
// most 1e-3 * P. The argmax is exact on the grid (no rounding of scores);
// ties resolve to the lexicographically smallest split.
PowerSplit grid_optimal_split(const GaussianChannel& ch, int levels,
                              double resolution);

// Exhaustive simplex search for the switch distribution maximizing one
// user's total rate, for 2 or 3 switch positions. `resolution` is the grid
// step on the weight simplex.
SwitchDistribution grid_optimal_switch(const DmcChannel& ch, int levels,
                                       double resolution);

// I(X_S; Y, X_T) via joint entropies H(X_S) + H(Y, X_T) - H(X_S, Y, X_T),
// built from scratch with its own enumeration.
double mi_entropy_oracle(const DmcChannel& ch, Subset target, Subset given);

// Maximum equal rate by numeric integration of 1/2 ∫_0^P dx / (MP + N - Mx)
// (adaptive Simpson, absolute tolerance ~1e-14).
double equal_rate_by_quadrature(const GaussianChannel& ch);

// Rate of one virtual user computed on the switched super-channel by full
// enumeration: I(X_{ik}; Y, S_1..S_M, X_given), where user j's switch has
// switch_weights[j-1].size() positions. `given` lists already decoded
// virtual users. Used to cross-check the mixture rate formulas and the
// schedule verifier's mutual-information values.
double virtual_user_info(const DmcChannel& ch,
                         const std::vector<std::vector<double>>& switch_weights,
                         UserRef target, const std::vector<UserRef>& given);

}  // namespace drs
