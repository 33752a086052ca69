#pragma once

namespace convqa {

inline constexpr const char* kVersion = "0.1.0";

} // namespace convqa
