#pragma once

#include <complex>

namespace optodistill {

using cplx = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "optodistill";

}  // namespace optodistill
