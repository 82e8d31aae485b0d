#pragma once

namespace phasecover {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace phasecover
