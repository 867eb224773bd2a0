#include "kmsqft/kms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kmsqft/quadrature.hpp"

namespace kmsqft {

double TimeSmearing::density(double t) const {
  if (!(epsilon > 0.0)) throw std::domain_error("TimeSmearing: epsilon must be positive");
  double tau = t + 2.0 * epsilon;  // distance from the left end of the support
  if (tau <= 0.0 || tau >= epsilon) return 0.0;
  double s = epsilon - tau;
  if (profile == 0) return 30.0 / std::pow(epsilon, 5) * tau * tau * s * s;
  if (profile == 1) return 140.0 / std::pow(epsilon, 7) * tau * tau * tau * s * s * s;
  throw std::domain_error("TimeSmearing: unknown profile index");
}

double VanHoveProfile::operator()(double r) const {
  if (r <= n) return 1.0;
  if (r >= n + 1) return 0.0;
  return (n + 1) - r;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void validate_interaction(const InteractionSpec& spec) {
  if (spec.power < 2 || spec.power > 6 || spec.power % 2 != 0)
    throw std::domain_error("InteractionSpec: power must be even, between 2 and 6");
}

/// Distance of u to the nearest edge of the imaginary-time domain, which
/// controls how singular the near-cone radial integrand is.
double edge_distance(double u, const FieldParams& params) {
  if (params.vacuum()) return u;
  return std::min(u, params.beta - u);
}

/// The radial integrand near the light cone grows like (edge distance)^-3
/// before cancellation; the propagator tolerance is tightened accordingly so
/// that the cancellation noise stays below the quadrature budget.
double images_tolerance(double ue) {
  return std::clamp(1e-4 * ue * ue * ue, 1e-13, 1e-8);
}

double radial_rel_tolerance(double ue) {
  return std::clamp(1e-5 * ue * ue * ue, 5e-13, 1e-9);
}

Complex two_point(double t, double u, double r, const FieldParams& params, double tol) {
  if (params.vacuum()) return vac_two_point({t, u, r}, params);
  return kms_two_point_images({t, u, r}, params, tol);
}

/// int_lo^hi r^2 w(r) D(t - iu, r)^k dr, split at the light-cone radius |t|
/// and at an optional kink radius of the weight.
Complex radial_integral(int k, double t, double u, double lo, double hi,
                        const std::function<double(double)>& w, const FieldParams& params,
                        double kink = -1.0) {
  double ue = edge_distance(u, params);
  double tol = images_tolerance(ue);
  QuadratureConfig qc;
  qc.rel_tol = radial_rel_tolerance(ue);
  qc.abs_tol = 1e-16;
  auto f = [&](double r) {
    Complex d = two_point(t, u, r, params, tol);
    Complex p = d;
    for (int i = 1; i < k; ++i) p *= d;
    double weight = w ? w(r) : 1.0;
    return r * r * weight * p;
  };
  std::vector<double> pts{lo};
  double cone = std::abs(t);
  if (cone > lo && cone < hi) pts.push_back(cone);
  if (kink > lo && kink < hi) pts.push_back(kink);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  Complex total{0.0, 0.0};
  for (size_t i = 1; i < pts.size(); ++i) total += integrate(f, pts[i - 1], pts[i], qc).value;
  return total;
}

/// Imaginary-time integral of `inner` over [0, beta] (or [0, inf) for the
/// ground state). The endpoint strips, where the radial integral is dominated
/// by near-cone cancellation and its noise floor grows like u^-3, are
/// integrated by midpoint evaluation: `inner` approaches its boundary value
/// smoothly, so the strip error is O(u_edge^3 inner'').
Complex imaginary_time_integral(const std::function<Complex(double)>& inner, int k,
                                const FieldParams& params, const CorrectionConfig& cfg,
                                double* err_acc) {
  double h0 = cfg.u_edge;
  Complex total = h0 * inner(0.5 * h0);
  double hi;
  if (params.vacuum()) {
    // |inner(u)| decays at least like e^{-k m u}
    hi = std::max(2.0, std::log(1.0 / cfg.tail_tol) / (k * params.mass));
  } else {
    hi = params.beta - h0;
    total += h0 * inner(params.beta - 0.5 * h0);
  }
  QuadratureConfig qc;
  qc.rel_tol = cfg.u_rel_tol;
  qc.abs_tol = cfg.u_abs_tol;
  QuadratureResult mid = integrate(inner, h0, hi, qc);
  if (err_acc) *err_acc += mid.error + 1e-3 * cfg.u_edge * std::abs(total);
  Complex v = total + mid.value;
  // the beta -> infinity limit of the thermal integral keeps both edges of
  // [0, beta]; the upper edge contributes the complex conjugate
  if (params.vacuum()) v += std::conj(v);
  return v;
}

/// Time-smearing nodes and weights; in full mode the Gauss rule integrates
/// the polynomial bump densities exactly.
std::vector<std::pair<double, double>> smearing_nodes(const TimeSmearing& sm, int n_nodes) {
  if (!(sm.epsilon > 0.0)) throw std::domain_error("TimeSmearing: epsilon must be positive");
  if (sm.mode == TimeSmearing::Mode::delta) return {{sm.delta_time(), 1.0}};
  std::vector<double> x, w;
  gauss_legendre(std::max(4, n_nodes), -2.0 * sm.epsilon, -sm.epsilon, x, w);
  std::vector<std::pair<double, double>> nodes;
  for (size_t i = 0; i < x.size(); ++i) nodes.push_back({x[i], w[i] * sm.density(x[i])});
  return nodes;
}

struct DegreeInfo {
  bool matches = false;
  double multiplier = 0.0;  // combinatorial weight of the two-vertex graph
  std::string note;
};

/// Connected two-vertex graphs between A (power a) and :phi^k: carry exactly
/// k lines; self-loops at A are allowed only for a vacuum-ordered A in a
/// thermal state and contribute the thermal-mass constant per loop.
DegreeInfo degree_multiplier(const WickMonomial& A, int k, const FieldParams& params) {
  int a = A.power;
  if (a == k) return {true, factorial(k), ""};
  bool loops = A.vacuum_ordered && !params.vacuum();
  if (loops && a > k && (a - k) % 2 == 0) {
    int l = (a - k) / 2;
    double c = thermal_mass(params.mass, params.beta);
    double weight = factorial(a) / (factorial(l) * std::pow(2.0, l));
    return {true, weight * std::pow(c, l), ""};
  }
  return {false, 0.0,
          "no connected two-vertex contraction matches degrees (" + std::to_string(a) + ", " +
              std::to_string(k) + "): exact zero"};
}

void validate_state(const FieldParams& params) {
  if (!(params.mass > 0.0)) throw std::domain_error("correction: mass must be positive");
  if (!params.vacuum() && !(params.beta > 0.0))
    throw std::domain_error("correction: beta must be positive");
}

/// Shared core of the first-order value: the smeared, imaginary-time
/// integrated radial integral with weight w on [lo, hi], without prefactors.
Complex smeared_correction_raw(int k, double lo, double hi,
                               const std::function<double(double)>& w,
                               const std::vector<std::pair<double, double>>& t_nodes,
                               const FieldParams& params, const CorrectionConfig& cfg,
                               double* err_acc) {
  Complex raw{0.0, 0.0};
  for (const auto& [t, wt] : t_nodes) {
    auto inner = [&](double u) { return radial_integral(k, t, u, lo, hi, w, params); };
    double err = 0.0;
    raw += wt * imaginary_time_integral(inner, k, params, cfg, &err);
    if (err_acc) *err_acc += std::abs(wt) * err;
  }
  return raw;
}

/// Boundary commutator density B(s) = F(s - i0) - F(s - i beta), where
/// F(zeta) is the spatially weighted radial integral of the correlator at
/// complex time zeta. Both edge values are obtained by Richardson
/// extrapolation in the distance to the edge; for the ground state the
/// second term is absent. By locality, B vanishes for radial support outside
/// |s|, so the caller may cap the radial range.
Complex boundary_difference(int k, double s, double lo, double hi,
                            const std::function<double(double)>& w, const FieldParams& params,
                            double kink) {
  constexpr int L = 6;
  // the edge expansion of F in the edge distance converges on the scale of
  // the distance |s| to the real-time singularity
  double d0 = std::min(0.04, std::abs(s) / 4.0);
  if (!params.vacuum()) d0 = std::min(d0, params.beta / 25.0);
  Complex v[L];
  double dl[L];
  for (int j = 0; j < L; ++j) {
    dl[j] = d0 / (1 << j);
    v[j] = radial_integral(k, s, dl[j], lo, hi, w, params, kink);
    if (!params.vacuum())
      v[j] -= radial_integral(k, s, params.beta - dl[j], lo, hi, w, params, kink);
  }
  for (int j = 1; j < L; ++j)
    for (int m = L - 1; m >= j; --m) v[m] = v[m] + (v[m] - v[m - 1]) * (dl[m] / (dl[m - j] - dl[m]));
  return v[L - 1];
}

/// int_a^b B(s) ds. The fixed Gauss rule is accurate for the short smearing
/// segments; the adaptive path handles widely separated shift arguments.
Complex transport_integral(int k, double a, double b, double lo, double hi,
                           const std::function<double(double)>& w, const FieldParams& params,
                           double kink, bool adaptive) {
  auto B = [&](double s) {
    double cap = std::min(hi, std::abs(s) + 4.0);
    return boundary_difference(k, s, lo, cap, w, params, kink);
  };
  if (!adaptive) {
    std::vector<double> x, gw;
    gauss_legendre(8, a, b, x, gw);
    Complex acc{0.0, 0.0};
    for (size_t i = 0; i < x.size(); ++i) acc += gw[i] * B(x[i]);
    return acc;
  }
  QuadratureConfig qc;
  qc.rel_tol = 1e-7;
  qc.abs_tol = 1e-13;
  return integrate(B, a, b, qc).value;
}

/// Transported insertion integrals: the imaginary-time integral T(t) is not
/// shift invariant by itself; the Cauchy integral over the KMS strip
/// rectangle gives T(t2) - T(t1) = -i int_{t1}^{t2} B(s) ds. Transporting
/// every node to the common reference time t_ref,
///   G(t) = T(t) + i int_{t_ref}^{t} B(s) ds,
/// yields the shift-independent quantity; the residual spread of G measures
/// how well the contour identity is satisfied numerically.
std::vector<Complex> transported_values(int k, const std::vector<double>& ts, double t_ref,
                                        double lo, double hi,
                                        const std::function<double(double)>& w,
                                        const FieldParams& params, const CorrectionConfig& cfg,
                                        double kink, bool adaptive_transport,
                                        std::vector<double>* errs) {
  // cumulative transport over the sorted union of nodes and the reference
  std::vector<double> pts = ts;
  pts.push_back(t_ref);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  size_t iref = std::lower_bound(pts.begin(), pts.end(), t_ref) - pts.begin();
  std::vector<Complex> cum(pts.size(), Complex{0.0, 0.0});
  for (size_t i = iref + 1; i < pts.size(); ++i)
    cum[i] = cum[i - 1] + transport_integral(k, pts[i - 1], pts[i], lo, hi, w, params, kink,
                                             adaptive_transport);
  for (size_t i = iref; i-- > 0;)
    cum[i] = cum[i + 1] - transport_integral(k, pts[i], pts[i + 1], lo, hi, w, params, kink,
                                             adaptive_transport);
  std::vector<Complex> out;
  if (errs) errs->clear();
  for (double t : ts) {
    size_t idx = std::lower_bound(pts.begin(), pts.end(), t) - pts.begin();
    auto inner = [&](double u) { return radial_integral(k, t, u, lo, hi, w, params, kink); };
    double err = 0.0;
    Complex T = imaginary_time_integral(inner, k, params, cfg, &err);
    if (errs) errs->push_back(err + 1e-6 * std::abs(cum[idx]));
    Complex q = Complex(0.0, 1.0) * cum[idx];
    if (params.vacuum()) q += std::conj(q);  // transport of the conjugate edge
    out.push_back(T + q);
  }
  return out;
}

}  // namespace

CorrectionResult first_order_correction(const WickMonomial& A, const InteractionSpec& interaction,
                                        const TimeSmearing& smearing, const VanHoveProfile& h,
                                        const FieldParams& params, const CorrectionConfig& cfg) {
  validate_interaction(interaction);
  validate_state(params);
  if (h.n < 1) throw std::domain_error("first_order_correction: cutoff index must be >= 1");
  const int k = interaction.power;
  DegreeInfo deg = degree_multiplier(A, k, params);
  CorrectionResult res;
  res.order = 1;
  if (!deg.matches) {
    res.note = deg.note;
    return res;
  }
  auto t_nodes = smearing_nodes(smearing, cfg.time_nodes);
  double n = h.n;
  // every smearing node is transported to the common reference time, so the
  // result is independent of both the shift and the bump profile
  std::vector<double> ts;
  for (const auto& [t, wt] : t_nodes) ts.push_back(t);
  std::vector<double> errs;
  auto w = [&h](double r) { return h(r); };
  auto G = transported_values(k, ts, smearing.delta_time(), 0.0, n + 1.0, w, params, cfg,
                              /*kink=*/n, /*adaptive_transport=*/false, &errs);
  Complex raw{0.0, 0.0};
  double err = 0.0;
  for (size_t i = 0; i < t_nodes.size(); ++i) {
    raw += t_nodes[i].second * G[i];
    err += std::abs(t_nodes[i].second) * errs[i];
  }
  const double pref = 4.0 * M_PI * deg.multiplier;
  res.value = -pref * raw.real();
  res.error = pref * (err + std::abs(raw.imag()));
  res.certified = true;
  return res;
}

std::vector<CorrectionResult> first_order_sequence(const WickMonomial& A,
                                                   const InteractionSpec& interaction,
                                                   const TimeSmearing& smearing,
                                                   const std::vector<int>& indices,
                                                   const FieldParams& params,
                                                   const CorrectionConfig& cfg) {
  if (indices.empty()) throw std::invalid_argument("first_order_sequence: no indices");
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("first_order_sequence: duplicate indices");

  std::vector<CorrectionResult> out;
  out.push_back(first_order_correction(A, interaction, smearing, {sorted.front()}, params, cfg));
  if (out.front().note.size()) {  // degree-selection zero propagates
    for (size_t i = 1; i < sorted.size(); ++i) out.push_back(out.front());
    return out;
  }
  const int k = interaction.power;
  DegreeInfo deg = degree_multiplier(A, k, params);
  auto t_nodes = smearing_nodes(smearing, cfg.time_nodes);
  const double pref = 4.0 * M_PI * deg.multiplier;
  for (size_t i = 1; i < sorted.size(); ++i) {
    // the increment lives on the smooth, exponentially small shell
    // [n_prev, n+1]; it is integrated directly instead of re-integrating
    // the common core
    double np = sorted[i - 1], n = sorted[i];
    double err = 0.0;
    Complex shell = smeared_correction_raw(k, np, n, nullptr, t_nodes, params, cfg, &err);
    shell += smeared_correction_raw(
        k, n, n + 1.0, [n](double r) { return (n + 1.0) - r; }, t_nodes, params, cfg, &err);
    shell -= smeared_correction_raw(
        k, np, np + 1.0, [np](double r) { return (np + 1.0) - r; }, t_nodes, params, cfg, &err);
    CorrectionResult res = out.back();
    res.value += -pref * shell.real();
    res.error += pref * (err + std::abs(shell.imag()));
    out.push_back(res);
  }
  return out;
}

CorrectionResult second_order_correction(const WickMonomial& A, const InteractionSpec& interaction,
                                         const TimeSmearing& smearing, const VanHoveProfile& h,
                                         const FieldParams& params, int points_per_dim) {
  validate_interaction(interaction);
  validate_state(params);
  if (params.vacuum())
    throw std::domain_error("second_order_correction: requires a thermal state");
  if (points_per_dim < 4 || points_per_dim > 16)
    throw std::domain_error("second_order_correction: points_per_dim must be in [4, 16]");
  const int k = interaction.power;
  const double beta = params.beta;
  const double t0 = smearing.delta_time();
  const double hi = h.n + 1.0;
  const double loop_c = thermal_mass(params.mass, params.beta);

  auto eval = [&](int p) {
    std::vector<double> s_x, s_w, r_x, r_w, g_x, g_w;
    gauss_legendre(p, 0.0, 1.0, s_x, s_w);
    gauss_legendre(p, 0.0, hi, r_x, r_w);
    gauss_legendre(p, -1.0, 1.0, g_x, g_w);
    Complex acc{0.0, 0.0};
    for (int i2 = 0; i2 < p; ++i2) {      // u2 = beta s2
      double u2 = beta * s_x[i2];
      for (int i1 = 0; i1 < p; ++i1) {    // u1 = u2 s1 (ordered simplex)
        double u1 = u2 * s_x[i1];
        double jac_u = beta * beta * s_x[i2] * s_w[i2] * s_w[i1];
        for (int j1 = 0; j1 < p; ++j1) {
          double r1 = r_x[j1];
          double w1 = r_w[j1] * r1 * r1 * h(r1);
          for (int j2 = 0; j2 < p; ++j2) {
            double r2 = r_x[j2];
            double w2 = r_w[j2] * r2 * r2 * h(r2);
            for (int jg = 0; jg < p; ++jg) {
              double c = g_x[jg];
              Eigen::Vector3d x1(0.0, 0.0, r1);
              Eigen::Vector3d x2(r2 * std::sqrt(std::max(0.0, 1.0 - c * c)), 0.0, r2 * c);
              CorrelationProblem prob;
              prob.state = params;
              prob.loop_value = loop_c;
              if (A.power > 0)
                prob.monomials.push_back(
                    {0, A.power, {0.0, 0.0, Eigen::Vector3d::Zero()}, A.vacuum_ordered});
              prob.monomials.push_back({1, k, {t0, u1, x1}, false});
              prob.monomials.push_back({2, k, {t0, u2, x2}, false});
              acc += jac_u * w1 * w2 * g_w[jg] * connected_correlation(prob);
            }
          }
        }
      }
    }
    return 8.0 * M_PI * M_PI * acc;  // 4 pi (x1 direction) times 2 pi (azimuth of x2)
  };

  Complex coarse = eval(points_per_dim - 2);
  Complex fine = eval(points_per_dim);
  CorrectionResult res;
  res.order = 2;
  res.value = fine.real();
  res.error = std::abs(fine - coarse) + std::abs(fine.imag());
  res.certified = false;
  if (smearing.mode == TimeSmearing::Mode::full)
    res.note = "time smearing applied in the delta approximation at second order";
  return res;
}

VanHoveReport van_hove_limit(const std::function<double(int)>& v, const std::vector<int>& indices) {
  if (indices.size() < 3) throw std::invalid_argument("van_hove_limit: need at least 3 indices");
  VanHoveReport rep;
  rep.indices = indices;
  for (int n : indices) rep.values.push_back(v(n));
  std::vector<double> signed_diffs;
  for (size_t i = 1; i < rep.values.size(); ++i) {
    signed_diffs.push_back(rep.values[i] - rep.values[i - 1]);
    rep.diffs.push_back(std::abs(signed_diffs.back()));
  }
  // fitted kappa in |diff| ~ C e^{-kappa n} over the strictly positive diffs
  std::vector<double> ns, logs;
  for (size_t i = 0; i < rep.diffs.size(); ++i)
    if (rep.diffs[i] > 0.0) {
      ns.push_back(indices[i + 1]);
      logs.push_back(std::log(rep.diffs[i]));
    }
  if (ns.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
      sx += ns[i];
      sy += logs[i];
      sxx += ns[i] * ns[i];
      sxy += ns[i] * logs[i];
    }
    double denom = ns.size() * sxx - sx * sx;
    if (denom != 0.0) rep.decay_rate = -(ns.size() * sxy - sx * sy) / denom;
  }
  // geometric tail estimate from the last two differences
  rep.limit = rep.values.back();
  double d_last = signed_diffs.back();
  double d_prev = signed_diffs[signed_diffs.size() - 2];
  if (std::abs(d_prev) > 0.0) {
    double q = d_last / d_prev;
    if (std::abs(q) < 1.0) rep.limit += d_last * q / (1.0 - q);
  }
  bool geometric = true;
  for (size_t i = 1; i < rep.diffs.size(); ++i)
    if (!(rep.diffs[i] <= 0.95 * rep.diffs[i - 1])) geometric = false;
  double scale = std::abs(rep.values.back());
  rep.certified = geometric || rep.diffs.back() <= 1e-3 * scale;
  return rep;
}

double thermal_mass(double mass, double beta, const QuadratureConfig& cfg) {
  if (mass < 0.0) throw std::domain_error("thermal_mass: mass must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("thermal_mass: beta must be positive and finite");
  // integrand <= p e^{-beta p} for large p
  double P = tail_cutoff(beta, 1.0, 1e-20);
  auto f = [&](double p) {
    double w = std::sqrt(p * p + mass * mass);
    return p * p / (w * std::expm1(beta * w));
  };
  return integrate_real(f, 0.0, P, cfg) / (2.0 * M_PI * M_PI);
}

ReorderingReport wick_reordering_check(const FieldParams& params, double probe_r) {
  if (params.vacuum()) throw std::domain_error("wick_reordering_check: requires a thermal state");
  if (!(probe_r > 0.0)) throw std::domain_error("wick_reordering_check: probe_r must be positive");
  ReorderingReport rep;
  rep.c = thermal_mass(params.mass, params.beta);

  // q0 from the one-point value: omega_beta(:phi^4:_vac) = q0
  CorrelationProblem one;
  one.state = params;
  one.loop_value = rep.c;
  one.monomials.push_back({0, 4, {0.0, 0.0, Eigen::Vector3d::Zero()}, true});
  rep.q0 = full_correlation(one).real();

  // q2 from the mixed two-point value at a spacelike probe:
  // omega_beta(:phi^4:_vac(0) :phi^2:_beta(x)) = q2 * 2 D(x)^2
  CorrelationProblem two;
  two.state = params;
  two.loop_value = rep.c;
  two.monomials.push_back({0, 4, {0.0, 0.0, Eigen::Vector3d::Zero()}, true});
  two.monomials.push_back({1, 2, {0.0, 0.0, Eigen::Vector3d(0.0, 0.0, probe_r)}, false});
  Complex d = kms_two_point_images({0.0, 0.0, probe_r}, params, 1e-13);
  rep.q2 = (full_correlation(two) / (2.0 * d * d)).real();

  rep.q2_over_c = rep.q2 / rep.c;
  rep.q0_over_c2 = rep.q0 / (rep.c * rep.c);
  return rep;
}

ShiftReport t_shift_invariance(const WickMonomial& A, const InteractionSpec& interaction,
                               const FieldParams& params, const std::vector<double>& shifts,
                               const CorrectionConfig& cfg) {
  validate_interaction(interaction);
  validate_state(params);
  if (shifts.empty()) throw std::invalid_argument("t_shift_invariance: no shifts");
  for (double t : shifts)
    if (!(t < 0.0))
      throw std::domain_error(
          "t_shift_invariance: shifts must be strictly negative (the u-integral has a "
          "non-integrable contact singularity at shift 0)");
  const int k = interaction.power;
  DegreeInfo deg = degree_multiplier(A, k, params);
  if (!deg.matches) throw std::domain_error("t_shift_invariance: " + deg.note);

  ShiftReport rep;
  rep.shifts = shifts;
  // open radial integral: the integrand decays like e^{-k m (r - |t|)}
  double tmax = 0.0;
  for (double t : shifts) tmax = std::max(tmax, std::abs(t));
  double rmax = tmax + std::max(8.0, 45.0 / (k * params.mass));
  // anchor the transport at the shift closest to zero, where the insertion
  // integral is largest and the relative comparison is sharpest
  double t_ref = *std::max_element(shifts.begin(), shifts.end());
  auto G = transported_values(k, shifts, t_ref, 0.0, rmax, nullptr, params, cfg,
                              /*kink=*/-1.0, /*adaptive_transport=*/true, nullptr);
  for (const Complex& g : G) rep.values.push_back(4.0 * M_PI * deg.multiplier * g);
  double scale = 0.0;
  for (const Complex& v : rep.values) scale = std::max(scale, std::abs(v));
  double spread = 0.0;
  for (size_t i = 0; i < rep.values.size(); ++i)
    for (size_t j = i + 1; j < rep.values.size(); ++j)
      spread = std::max(spread, std::abs(rep.values[i] - rep.values[j]));
  rep.max_rel_spread = scale == 0.0 ? 0.0 : spread / scale;
  return rep;
}

}  // namespace kmsqft
