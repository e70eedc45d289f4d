#pragma once

namespace arf {
inline constexpr const char* version = "0.1.0";
}
