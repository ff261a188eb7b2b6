#pragma once

#include <numbers>

namespace drs {

// Unit in which rates and information quantities are reported.
// All internal computation is carried out in nats; conversion to bits is a
// final multiplication by 1/ln 2.
enum class LogBase { nat, bit };

inline double unit_factor(LogBase base) {
    return base == LogBase::nat ? 1.0 : std::numbers::log2e;
}

inline const char* unit_name(LogBase base) {
    return base == LogBase::nat ? "nat" : "bit";
}

}  // namespace drs
