#pragma once

#include <limits>
#include <utility>

#include "kmsqft/quadrature.hpp"

namespace kmsqft {

/// Mass and inverse temperature of the free field; beta = +inf selects the
/// vacuum state everywhere.
struct FieldParams {
  double mass = 1.0;
  double beta = std::numeric_limits<double>::infinity();
  bool vacuum() const { return !std::isfinite(beta); }
};

/// Relative spacetime displacement with complexified time t - iu and spatial
/// radius r (states are rotation invariant, only |x| enters).
struct ComplexTimeDisplacement {
  double t = 0.0;
  double u = 0.0;
  double r = 0.0;
};

inline double dispersion(double p_norm, const FieldParams& params) {
  return std::sqrt(p_norm * p_norm + params.mass * params.mass);
}

/// Vacuum two-point function at complexified time t - iu, closed form:
/// D(-iu, r) = m K_1(m s) / (4 pi^2 s), s = sqrt(u^2 + r^2), continued to
/// general t through s = sqrt(r^2 + (u + it)^2) with principal branch
/// Re s > 0. Requires u > 0, or u = 0 with r > |t| (spacelike).
Complex vac_two_point(const ComplexTimeDisplacement& d, const FieldParams& params);

/// Independent radial-quadrature evaluation of the vacuum two-point function
/// (mode integral with Bose weight absent); cross-check for the closed form.
/// Requires u > 0 for the momentum tail to converge.
Complex vac_two_point_quadrature(const ComplexTimeDisplacement& d, const FieldParams& params,
                                 const QuadratureConfig& cfg = {});

/// Thermal two-point function D_+^beta at t - iu, 0 < u < beta, computed as
/// the closed-form vacuum part plus the absolutely convergent Bose part by
/// radial quadrature. Falls back to vac_two_point when params.vacuum().
Complex kms_two_point(const ComplexTimeDisplacement& d, const FieldParams& params,
                      const QuadratureConfig& cfg = {});

/// Same function through the imaginary-time image sum
///   D_beta(t-iu, r) = sum_{n>=0} D_vac(t-i(u+n beta), r)
///                   + sum_{n>=1} D_vac(-t-i(n beta-u), r),
/// truncated when the e^{-m n beta} envelope drops below tol. Fast path for
/// quadrature-heavy consumers; admits the closed boundary u in [0, beta]
/// whenever r > |t|.
Complex kms_two_point_images(const ComplexTimeDisplacement& d, const FieldParams& params,
                             double tol = 1e-12);

/// Two members of the KMS boundary identity at real time t and radius r:
/// first  lim_{delta->0} D_beta(t - i(beta-delta), r)
/// second lim_{delta->0} D_beta(-t - i delta, r)
/// each by Richardson extrapolation in delta. Equality of the pair is the
/// two-point KMS condition omega(phi alpha_{t+i beta}(phi)) = omega(alpha_t(phi) phi).
std::pair<Complex, Complex> kms_boundary_check(double t, double r, const FieldParams& params);

}  // namespace kmsqft
