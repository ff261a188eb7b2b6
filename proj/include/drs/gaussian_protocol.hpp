#pragma once

#include <string>
#include <vector>

#include "drs/gaussian.hpp"
#include "drs/schedule.hpp"

namespace drs {

// One virtual user of the power-split construction for unequal virtual-user
// counts: user i follows its own optimal L_i-level split and rate rule.
struct VirtualUser {
    int owner = 0;  // 1-based
    int index = 0;  // 1-based
    double power = 0.0;
    double rate = 0.0;  // in the channel's unit
};

// Per-step accounting of a verified schedule, all in watts. `tolerance` is
// the interference-plus-noise the virtual user's rate was provisioned for,
// `actual` is what it faces given everything decoded before it.
struct ScheduleStep {
    UserRef who;
    double tolerance = 0.0;
    double actual = 0.0;
    double slack = 0.0;  // tolerance - actual
};

struct VerificationReport {
    bool ok = false;
    std::vector<ScheduleStep> steps;
    double min_slack = 0.0;
    int first_violation = -1;  // step index, -1 if none
    std::string error;         // structural problem, empty if none
};

// Builds all virtual users for count vector (L_1, ..., L_M): user i's powers
// follow the optimal L_i-level split and each rate is matched to the
// interference left after the user's own earlier levels are removed.
std::vector<VirtualUser> build_virtual_users(const GaussianChannel& ch,
                                             const std::vector<int>& counts);

// Generalized successive decoding: after the index-1 class, repeatedly decode
// the next virtual user of the owner with the least cumulative decoded power
// (ties broken toward the lowest owner id).
DecodingSchedule min_power_schedule(const std::vector<VirtualUser>& users,
                                    const GaussianChannel& ch);

// Checks that a schedule decodes every virtual user within its interference
// tolerance. Index-1 users are checked against the full interference (they
// are decodable in any order); every other step is checked against the
// interference remaining after all earlier entries are subtracted. A step
// with slack below -1e-12 or a structural defect fails the report.
VerificationReport verify_schedule(const std::vector<VirtualUser>& users,
                                   const DecodingSchedule& schedule,
                                   const GaussianChannel& ch);

}  // namespace drs
