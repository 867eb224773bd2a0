#pragma once

#include <string>

#include "kmsqft/wick.hpp"

namespace kmsqft {

/// Family of connected correlators F_n with the translated vertices swept
/// outward. Vertex 0 sits at the origin with u = 0; vertex i carries
/// imaginary time u[i-1] and position scale * directions[i-1], with scale
/// chosen so the sweep parameter r equals the effective radius r_e
/// (sqrt of the summed squared translations along the swept axis).
struct ClusterScan {
  std::vector<int> powers;                   // a_0 .. a_n
  FieldParams state;
  std::vector<Eigen::Vector3d> directions;   // unit directions, vertices 1..n
  std::vector<double> u;                     // imaginary times, vertices 1..n
  enum class Axis { spatial, imaginary_time } axis = Axis::spatial;
};

struct DecayFit {
  double rate = 0.0;         // positive = decay
  double log_prefactor = 0.0;
  double residual = 0.0;     // rms of log|F| residuals
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples_used = 0;
};

struct BoundReport {
  bool passed = false;
  double c_star = 0.0;       // max |F| e^{+rate r} over the samples
  double offending_radius = 0.0;
  std::string detail;
};

struct RearrangementReport {
  Complex original{0.0, 0.0};
  Complex rearranged{0.0, 0.0};
  double rel_diff = 0.0;
};

/// F_n at sweep radius r, via the connected correlation of the translated
/// Wick monomials.
Complex cluster_function(const ClusterScan& scan, double r);

/// The correlation problem behind cluster_function; exposed for oracles.
CorrelationProblem cluster_problem(const ClusterScan& scan, double r);

/// Least-squares fit of log|F| vs r on the sampled radii. Samples with |F|
/// at or below 10x noise_floor are dropped (shrinking the window); fewer
/// than 2 surviving samples is an error.
DecayFit fit_exponential(const std::vector<double>& radii, const std::vector<double>& magnitudes,
                         double noise_floor = 1e-280);
DecayFit decay_fit(const ClusterScan& scan, const std::vector<double>& radii,
                   double noise_floor = 1e-280);

/// Checks |F_n| <= c* e^{-rate r} with a single finite constant over the
/// samples: c* must be attained at the smallest radius and the windowed
/// maxima of |F| e^{+rate r} must be non-increasing outward. All radii must
/// exceed 2R (localization radius of the untranslated observables).
BoundReport bound_check(const ClusterScan& scan, const std::vector<double>& radii, double R,
                        double rate);

/// Mass-shell integral I_f(-iu, r) = 4 pi int dp p^2/(2 omega) ahat(omega)
/// bhat(p) sinc(p r) e^{-u omega} e^{-b omega}, with f = a(x^0) b(|x|) a
/// separable C^infty bump of support radius bump_R, unit normalization
/// (so bump_R = 0 degenerates to fhat = 1, i.e. (2pi)^3 D_vac).
Complex mass_shell_integral(double bump_R, double u, double r, double b, const FieldParams& params,
                            const QuadratureConfig& cfg = {});

/// Evaluates F_n at the scan tuple and at the KMS-rearranged tuple (A_0
/// cycled to the end, imaginary times shifted into the simplex) and reports
/// the relative difference; equality is the thermal clustering symmetry.
RearrangementReport kms_rearrangement_check(const ClusterScan& scan, double r);

}  // namespace kmsqft
