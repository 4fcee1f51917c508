#pragma once

namespace heisenframe {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVersionString = "heisenframe 0.1.0";

}  // namespace heisenframe
