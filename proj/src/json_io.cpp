#include "drs/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace drs {

using nlohmann::json;

void to_json(json& j, const UserRef& ref) { j = json::array({ref.owner, ref.index}); }

void from_json(const json& j, UserRef& ref) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("virtual-user reference must be [owner, index]");
    ref.owner = j[0].get<int>();
    ref.index = j[1].get<int>();
}

void to_json(json& j, const DecodingSchedule& schedule) {
    j = json{{"order", schedule.order}};
}

void from_json(const json& j, DecodingSchedule& schedule) {
    schedule.order = j.at("order").get<std::vector<UserRef>>();
}

void to_json(json& j, const ScheduleStep& step) {
    j = json{{"owner", step.who.owner},
             {"index", step.who.index},
             {"tolerance", step.tolerance},
             {"actual", step.actual},
             {"slack", step.slack}};
}

void to_json(json& j, const VerificationReport& report) {
    j = json{{"ok", report.ok},
             {"steps", report.steps},
             {"min_slack", report.min_slack}};
    if (report.first_violation >= 0) j["first_violation"] = report.first_violation;
    if (!report.error.empty()) j["error"] = report.error;
}

void to_json(json& j, const DmcScheduleStep& step) {
    j = json{{"owner", step.who.owner},
             {"index", step.who.index},
             {"mutual_info", step.mutual_info},
             {"rate", step.rate},
             {"slack", step.slack}};
}

void to_json(json& j, const DmcVerificationReport& report) {
    j = json{{"ok", report.ok},
             {"steps", report.steps},
             {"min_slack", report.min_slack}};
    if (report.first_violation >= 0) j["first_violation"] = report.first_violation;
    if (!report.error.empty()) j["error"] = report.error;
}

DmcChannel dmc_channel_from_json(const json& j, LogBase base) {
    if (!j.is_object()) throw std::runtime_error("channel document must be an object");
    if (!j.contains("schema") || j["schema"] != kDmcSchemaV1)
        throw std::runtime_error(std::string("channel document must declare schema \"") +
                                 kDmcSchemaV1 + "\"");
    try {
        return DmcChannel(j.at("alphabets").get<std::vector<int>>(),
                          j.at("output").get<int>(),
                          j.at("W").get<std::vector<std::vector<double>>>(),
                          j.at("inputs").get<std::vector<std::vector<double>>>(),
                          base);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed channel document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("invalid channel: ") + e.what());
    }
}

json dmc_channel_to_json(const DmcChannel& ch) {
    return json{{"schema", kDmcSchemaV1},
                {"alphabets", ch.alphabet_sizes},
                {"output", ch.output_size},
                {"W", ch.transition},
                {"inputs", ch.inputs}};
}

DmcChannel load_dmc_channel(const std::string& path, LogBase base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("cannot parse channel file: ") + e.what());
    }
    return dmc_channel_from_json(j, base);
}

}  // namespace drs
