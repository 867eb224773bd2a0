#include "kmsqft/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include "kmsqft/quadrature.hpp"

namespace kmsqft {

namespace {

// asymptotic series K_1(z) ~ sqrt(pi/2z) e^{-z} sum_j t_j, optimally
// truncated; relative error below ~e^{-2|z|}, used for |z| >= 16
std::complex<double> k1_asymptotic(std::complex<double> z) {
  std::complex<double> sum = 1.0, term = 1.0;
  double prev = 1.0;
  for (int j = 1; j <= 40; ++j) {
    term *= (4.0 - (2.0 * j - 1.0) * (2.0 * j - 1.0)) / (8.0 * j) / z;
    double mag = std::abs(term);
    if (mag > prev) break;  // series turned divergent
    sum += term;
    if (mag < 1e-17) break;
    prev = mag;
  }
  return std::sqrt(M_PI / (2.0 * z)) * std::exp(-z) * sum;
}

// For z close to the imaginary axis the real-axis contour oscillates with
// unbounded phase ~46 |Im z| / Re z. Rotating the path by alpha = -pi/4
// sign(Im z) keeps the phase bounded (~46 rad) for every argument:
//   K_1(z) = i int_0^alpha e^{-z cos T} cos T dT
//          + int_0^S e^{-z cosh(s + i alpha)} cosh(s + i alpha) ds
std::complex<double> k1_rotated(std::complex<double> z, double tol) {
  const double x = z.real(), y = z.imag();
  const double alpha = (y > 0.0 ? -1.0 : 1.0) * M_PI / 4.0;
  const double decay = (x + std::abs(y)) / std::sqrt(2.0);  // Re[z cosh(s+ia)] growth scale
  const double S = std::max(1.0, std::acosh(1.0 + 46.0 / decay));
  QuadratureConfig cfg;
  cfg.rel_tol = 0.25 * tol;
  cfg.abs_tol = 0.0;
  std::complex<double> seg = integrate(
      [&](double tau) {
        double c = std::cos(tau);
        return std::exp(-z * c) * c;
      },
      0.0, alpha, cfg).value;
  std::complex<double> ray = integrate(
      [&](double s) {
        std::complex<double> c = std::cosh(std::complex<double>(s, alpha));
        return std::exp(-z * c) * c;
      },
      0.0, S, cfg).value;
  return std::complex<double>(0.0, 1.0) * seg + ray;
}

}  // namespace

std::complex<double> bessel_k1(std::complex<double> z, double tol) {
  const double x = z.real();
  if (!(x > 0.0)) throw std::domain_error("bessel_k1: requires Re z > 0");
  // optimally truncated asymptotics reach ~e^{-2|z|} relative error
  double z_asym = std::max(4.0, 0.5 * std::log(10.0 / tol));
  if (std::abs(z) >= z_asym) return k1_asymptotic(z);
  if (std::abs(z.imag()) > 8.0 * x) return k1_rotated(z, tol);
  // truncate where e^{-x cosh s} has dropped 46 e-folds below e^{-x}:
  // the discarded tail is below 1e-20 of the result
  const double S = std::acosh(1.0 + 46.0 / x);
  auto g = [&z](double s) {
    double c = std::cosh(s);
    return std::exp(-z * c) * c;
  };
  // trapezoid with endpoint halves; the integrand extends evenly through 0,
  // so refinement converges spectrally in h
  int n = 16;
  std::complex<double> prev{0.0, 0.0};
  for (int pass = 0; pass < 18; ++pass, n *= 2) {
    double h = S / n;
    std::complex<double> sum = 0.5 * (g(0.0) + g(S));
    for (int i = 1; i < n; ++i) sum += g(i * h);
    std::complex<double> cur = sum * h;
    if (pass > 0 && std::abs(cur - prev) <= tol * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  throw std::runtime_error("bessel_k1: trapezoid refinement did not converge");
}

}  // namespace kmsqft
