#pragma once

namespace polyconc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace polyconc
