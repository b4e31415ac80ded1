#pragma once

namespace airsea {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace airsea
