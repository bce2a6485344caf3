#pragma once

namespace cdsphere {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cdsphere
