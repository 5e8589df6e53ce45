#pragma once

namespace snnrx {
inline constexpr const char* kVersion = "0.1.0";
}
