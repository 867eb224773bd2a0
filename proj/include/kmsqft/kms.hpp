#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kmsqft/propagators.hpp"
#include "kmsqft/wick.hpp"

namespace kmsqft {

/// Interaction density :phi^k: with k even, 2 <= k <= 6.
struct InteractionSpec {
  int power = 4;
};

/// Normalized negative-time smearing density with unit integral, supported
/// in (-2 epsilon, -epsilon). Two C^1 polynomial bump shapes are provided so
/// that profile independence can be tested.
struct TimeSmearing {
  enum class Mode { full, delta };
  double epsilon = 0.1;
  Mode mode = Mode::full;
  int profile = 0;  // 0: squared-factor bump, 1: cubed-factor bump

  double density(double t) const;
  /// Center of mass of the support, used by the delta approximation.
  double delta_time() const { return -1.5 * epsilon; }
};

/// Spatial cutoff: 1 for r <= n, linear ramp to 0 on [n, n+1].
struct VanHoveProfile {
  int n = 2;
  double operator()(double r) const;
};

/// Tuning knobs for the correction integrals.
struct CorrectionConfig {
  /// Width of the imaginary-time endpoint strips, where the radial integral
  /// requires heavy cancellation; they are integrated by midpoint evaluation.
  double u_edge = 1e-3;
  /// Budget for the middle imaginary-time integral (absolute, on the raw
  /// integral before the k! 4 pi prefactor).
  double u_abs_tol = 3e-10;
  double u_rel_tol = 1e-6;
  /// Gauss-Legendre nodes for the full time smearing.
  int time_nodes = 6;
  /// Tail threshold for the beta = infinity (ground state) imaginary-time
  /// integral and for open radial integrals.
  double tail_tol = 1e-14;
};

struct CorrectionResult {
  double value = 0.0;
  double error = 0.0;     // absolute estimate, includes the imaginary residual
  bool certified = true;  // false for fixed-grid (non-adaptive) evaluations
  int order = 1;
  std::string note;       // diagnostic, e.g. for exact degree-selection zeros
};

/// First-order correction
///   -int_0^beta du int d^3x h(x) int dt chidot(t) w^c(A (x) alpha_{t+iu,x}(:phi^k:)).
/// Exactly zero (with a note) when no connected two-vertex graph matches the
/// degrees of A and the interaction.
CorrectionResult first_order_correction(const WickMonomial& A, const InteractionSpec& interaction,
                                        const TimeSmearing& smearing, const VanHoveProfile& h,
                                        const FieldParams& params,
                                        const CorrectionConfig& cfg = {});

/// First-order corrections for several cutoff indices at once. The common
/// core is integrated once; successive indices differ by smooth, exponentially
/// small shell integrals, so the whole sequence costs about one evaluation.
std::vector<CorrectionResult> first_order_sequence(const WickMonomial& A,
                                                   const InteractionSpec& interaction,
                                                   const TimeSmearing& smearing,
                                                   const std::vector<int>& indices,
                                                   const FieldParams& params,
                                                   const CorrectionConfig& cfg = {});

/// Second-order (two-insertion) simplex term, evaluated on a fixed tensor
/// Gauss grid over the ordered imaginary-time simplex and the rotation-reduced
/// spatial variables (r1, r2, cos theta). The error estimate compares two rule
/// orders; the result is reported as non-certified.
CorrectionResult second_order_correction(const WickMonomial& A, const InteractionSpec& interaction,
                                         const TimeSmearing& smearing, const VanHoveProfile& h,
                                         const FieldParams& params, int points_per_dim = 8);

struct VanHoveReport {
  std::vector<int> indices;
  std::vector<double> values;
  std::vector<double> diffs;  // successive absolute differences
  double limit = 0.0;
  double decay_rate = 0.0;  // fitted kappa in |diff| ~ C e^{-kappa n}
  bool certified = false;   // true when the differences shrink geometrically
};

/// Extrapolate v(n) along a cutoff sequence (at least 3 indices).
VanHoveReport van_hove_limit(const std::function<double(int)>& v, const std::vector<int>& indices);

/// Coincident-point difference of thermal and vacuum two-point functions,
///   c(beta) = (1 / 2 pi^2) int_0^inf p^2 / (omega (e^{beta omega} - 1)) dp,
/// defined for mass >= 0; at mass = 0 it equals 1 / (12 beta^2).
double thermal_mass(double mass, double beta, const QuadratureConfig& cfg = {});

/// Determines (q2, q0) in :phi^4:_vac = :phi^4:_beta + q2 :phi^2:_beta + q0
/// by matching thermal expectation values computed with mixed orderings
/// against the reordered right-hand side. The exact constants are q2 = 6 c
/// and q0 = 3 c^2.
struct ReorderingReport {
  double c = 0.0;
  double q2 = 0.0;
  double q0 = 0.0;
  double q2_over_c = 0.0;
  double q0_over_c2 = 0.0;
};
ReorderingReport wick_reordering_check(const FieldParams& params, double probe_r = 0.7);

/// Evaluates T(t) = int_0^beta du int d^3x w^c(A (x) alpha_{t+iu,x}(:phi^k:))
/// at each real-time shift t < 0 and reports the spread. Equality of the
/// values is the first-order statement of smearing-profile independence.
/// The shift t = 0 is excluded: the integrand develops a non-integrable
/// contact singularity at u = 0 there.
struct ShiftReport {
  std::vector<double> shifts;
  std::vector<Complex> values;
  double max_rel_spread = 0.0;
};
ShiftReport t_shift_invariance(const WickMonomial& A, const InteractionSpec& interaction,
                               const FieldParams& params, const std::vector<double>& shifts,
                               const CorrectionConfig& cfg = {});

}  // namespace kmsqft
