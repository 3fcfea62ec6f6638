#pragma once

namespace ductmodes {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ductmodes
