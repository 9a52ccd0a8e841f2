#pragma once

namespace hirota {
inline constexpr const char* kVersion = "0.1.0";
}
