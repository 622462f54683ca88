#pragma once

namespace curtainlab {
inline constexpr const char* kVersion = "0.1.0";
}
