#pragma once

#include <complex>

namespace weylherm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// sqrt(pi) = zeroth moment of the Gauss-Hermite weight exp(-y^2)
inline constexpr double kSqrtPi = 1.77245385090551602729816748334114518;

} // namespace weylherm
