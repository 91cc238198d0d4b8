#pragma once

namespace starspec {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace starspec
