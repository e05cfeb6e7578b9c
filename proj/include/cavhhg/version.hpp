#pragma once

namespace cavhhg {

inline constexpr const char* tool_version = "cavhhg 0.1.0";

} // namespace cavhhg
