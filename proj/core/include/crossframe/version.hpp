#pragma once

namespace crossframe {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crossframe
