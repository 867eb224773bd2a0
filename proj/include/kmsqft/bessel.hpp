#pragma once

#include <complex>

namespace kmsqft {

/// Modified Bessel function K_1(z) for complex z with Re z > 0, by trapezoid
/// quadrature of K_1(z) = int_0^inf e^{-z cosh s} cosh s ds with step
/// refinement until two successive halvings agree to `tol`. The integrand is
/// even around 0 after extension, so the trapezoid rule converges spectrally.
/// Throws std::domain_error when Re z <= 0.
std::complex<double> bessel_k1(std::complex<double> z, double tol = 1e-13);

}  // namespace kmsqft
