#pragma once

namespace sarve {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sarve
