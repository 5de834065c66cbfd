#pragma once

namespace sqc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sqc
