#pragma once

#include <string>

#include "json.hpp"

#include "drs/dmc.hpp"
#include "drs/dmc_protocol.hpp"
#include "drs/gaussian_protocol.hpp"
#include "drs/schedule.hpp"

namespace drs {

// Schema tag required in channel description files.
inline constexpr const char* kDmcSchemaV1 = "drs-dmc-1";

void to_json(nlohmann::json& j, const UserRef& ref);
void from_json(const nlohmann::json& j, UserRef& ref);

void to_json(nlohmann::json& j, const DecodingSchedule& schedule);
void from_json(const nlohmann::json& j, DecodingSchedule& schedule);

void to_json(nlohmann::json& j, const ScheduleStep& step);
void to_json(nlohmann::json& j, const VerificationReport& report);

void to_json(nlohmann::json& j, const DmcScheduleStep& step);
void to_json(nlohmann::json& j, const DmcVerificationReport& report);

// Channel description document:
//   {"schema": "drs-dmc-1", "alphabets": [..], "output": n,
//    "W": [[..], ..], "inputs": [[..], ..]}
// with W indexed by row-major input tuple (first user slowest). Throws
// std::runtime_error on malformed documents.
DmcChannel dmc_channel_from_json(const nlohmann::json& j,
                                 LogBase base = LogBase::nat);
nlohmann::json dmc_channel_to_json(const DmcChannel& ch);
DmcChannel load_dmc_channel(const std::string& path,
                            LogBase base = LogBase::nat);

}  // namespace drs
