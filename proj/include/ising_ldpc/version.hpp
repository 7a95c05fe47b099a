#pragma once

namespace ildpc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ildpc
