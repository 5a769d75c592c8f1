#pragma once

namespace randflight {

inline constexpr const char* version = "0.1.0";

} // namespace randflight
