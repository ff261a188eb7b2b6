#pragma once

#include <string>
#include <vector>

#include "drs/dmc.hpp"
#include "drs/schedule.hpp"

namespace drs {

// Rate system for unequal virtual-user counts over a symmetric DMC: user i
// runs its own uniform switch over L_i positions and takes the binomial-
// mixture rate with its own progress fraction (k-1)/L_i.
struct SwitchSystem {
    std::vector<int> counts;
    std::vector<std::vector<double>> rates;  // rates[i][k-1] for user i+1
};

struct DmcScheduleStep {
    UserRef who;
    double mutual_info = 0.0;  // supportable rate given what is decoded
    double rate = 0.0;         // allocated rate
    double slack = 0.0;        // mutual_info - rate
};

struct DmcVerificationReport {
    bool ok = false;
    std::vector<DmcScheduleStep> steps;
    double min_slack = 0.0;
    int first_violation = -1;
    std::string error;
};

// Builds the rate system; rejects channels that do not satisfy the symmetry
// condition and counts below 1.
SwitchSystem build_switch_system(const DmcChannel& ch,
                                 const std::vector<int>& counts);

// Generalized successive decoding: after the index-1 class, repeatedly decode
// the next virtual user of the owner with the least decoded progress
// fraction. Progress n_i/L_i is compared exactly (integer cross products),
// ties broken toward the lowest owner id.
DecodingSchedule min_progress_schedule(const SwitchSystem& sys);

// Checks each step's rate against the exact mutual information available
// given all previously decoded virtual users and all switch values, expanded
// over the other users' progress fractions. Index-1 users are checked
// against zero progress; they are decodable in any order.
DmcVerificationReport verify_schedule(const DmcChannel& ch,
                                      const SwitchSystem& sys,
                                      const DecodingSchedule& schedule);

}  // namespace drs
