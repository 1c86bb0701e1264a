#pragma once

namespace samkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace samkit
