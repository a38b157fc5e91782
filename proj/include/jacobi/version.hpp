#pragma once

namespace jacobi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jacobi
