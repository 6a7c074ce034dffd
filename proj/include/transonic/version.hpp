#pragma once

namespace transonic {
inline constexpr const char* kVersion = "0.1.0";
}
