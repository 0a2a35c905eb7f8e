#pragma once

namespace phlab {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace phlab
