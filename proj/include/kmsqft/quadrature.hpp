#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kmsqft {

using Complex = std::complex<double>;

/// Tolerances and budgets for the adaptive integrators.
struct QuadratureConfig {
  double rel_tol = 5e-13;
  double abs_tol = 1e-16;
  int max_subdiv = 20000;
  /// Oscillation-aware pre-splitting: when an integrand carries a factor
  /// e^{i omega t}, panels are kept below pi / (4 |t|) in omega.
  double max_panel_width = 0.0;  // 0 = no limit
};

struct QuadratureResult {
  Complex value{0.0, 0.0};
  double error = 0.0;       // achieved absolute error estimate
  bool converged = true;
  int subdivisions = 0;
};

struct QuadratureError : std::runtime_error {
  QuadratureResult partial;
  explicit QuadratureError(const QuadratureResult& r)
      : std::runtime_error("quadrature failed to converge (achieved error " +
                           std::to_string(r.error) + ")"),
        partial(r) {}
};

/// Adaptive Gauss-Kronrod 7-15 on [a, b] for a complex-valued integrand.
/// Deterministic: recursive bisection in a fixed order, pairwise summation.
QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Real-valued convenience wrapper; imaginary parts of the integrand are
/// carried along and folded into the error estimate of the caller.
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureConfig& cfg = {});

/// Smallest P with bound_coeff * (P + 1/alpha) * e^{-alpha P} / alpha below
/// tol: certified truncation point for tails dominated by p * e^{-alpha p}.
double tail_cutoff(double alpha, double bound_coeff, double tol);

/// Nodes and weights of an n-point Gauss-Legendre rule on [a, b]
/// (n <= 64; used for the fixed-order simplex integrals).
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace kmsqft
