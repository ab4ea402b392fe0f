#pragma once

namespace covertime {

inline constexpr const char* kToolName = "covertime";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace covertime
