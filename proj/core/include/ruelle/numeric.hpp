#pragma once

#include <cmath>
#include <complex>

namespace ruelle {

// e^z - 1 without cancellation near z = 0 (and near 2 pi i k for the real part).
inline std::complex<double> expm1(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

}  // namespace ruelle
