#pragma once

namespace plcfh {

inline constexpr const char* tool_name = "plcfh";
inline constexpr const char* tool_version = "1.0.0";

} // namespace plcfh
