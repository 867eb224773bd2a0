#include "kmsqft/propagators.hpp"

#include <stdexcept>

#include "kmsqft/bessel.hpp"

namespace kmsqft {

namespace {

constexpr double kFourPiSq = 4.0 * M_PI * M_PI;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// principal-branch s = sqrt(r^2 + (u + it)^2), Re s > 0 on the admissible set
Complex displacement_s(const ComplexTimeDisplacement& d) {
  Complex z(d.r * d.r + d.u * d.u - d.t * d.t, 2.0 * d.u * d.t);
  return std::sqrt(z);
}

void check_vac_admissible(const ComplexTimeDisplacement& d) {
  if (d.u < 0.0) throw std::domain_error("vac_two_point: u < 0");
  if (d.u == 0.0 && d.r == 0.0) throw std::domain_error("vac_two_point: coincident point");
  if (d.u == 0.0 && std::abs(d.t) >= d.r)
    throw std::domain_error("vac_two_point: u = 0 requires spacelike separation r > |t|");
}

}  // namespace

namespace {

Complex vac_two_point_tol(const ComplexTimeDisplacement& d, const FieldParams& params,
                          double bessel_tol) {
  if (!(params.mass > 0.0)) throw std::domain_error("vac_two_point: mass must be positive");
  check_vac_admissible(d);
  Complex s = displacement_s(d);
  if (!(s.real() > 0.0)) throw std::domain_error("vac_two_point: displacement on the light cone branch");
  const double m = params.mass;
  return m * bessel_k1(m * s, bessel_tol) / (kFourPiSq * s);
}

}  // namespace

Complex vac_two_point(const ComplexTimeDisplacement& d, const FieldParams& params) {
  return vac_two_point_tol(d, params, 1e-13);
}

Complex vac_two_point_quadrature(const ComplexTimeDisplacement& d, const FieldParams& params,
                                 const QuadratureConfig& cfg) {
  if (!(params.mass > 0.0)) throw std::domain_error("vac_two_point_quadrature: mass must be positive");
  if (!(d.u > 0.0)) throw std::domain_error("vac_two_point_quadrature: requires u > 0");
  const double m = params.mass, u = d.u, r = d.r, t = d.t;
  // |integrand| <= p e^{-u p} / (4 pi^2) since omega >= p and e^{-u omega} <= e^{-u p}
  double tail_tol = std::max(1e-20, cfg.abs_tol * 1e-2);
  double P = tail_cutoff(u, 1.0 / kFourPiSq, tail_tol);
  QuadratureConfig qc = cfg;
  if (t != 0.0) qc.max_panel_width = M_PI / (4.0 * std::abs(t));
  auto f = [&](double p) {
    double w = std::sqrt(p * p + m * m);
    return (p * p / w) * sinc(p * r) * std::exp(-u * w) *
           Complex(std::cos(t * w), -std::sin(t * w)) / kFourPiSq;
  };
  return integrate(f, 0.0, P, qc).value;
}

Complex kms_two_point(const ComplexTimeDisplacement& d, const FieldParams& params,
                      const QuadratureConfig& cfg) {
  if (params.vacuum()) return vac_two_point(d, params);
  if (!(params.mass > 0.0)) throw std::domain_error("kms_two_point: mass must be positive");
  const double beta = params.beta, m = params.mass, u = d.u, r = d.r, t = d.t;
  if (!(u > 0.0 && u < beta)) throw std::domain_error("kms_two_point: u outside (0, beta)");
  Complex vac = vac_two_point(d, params);
  // Bose part: both frequency signs carry e^{-beta omega}/(1 - e^{-beta omega})
  double bose_cap = 1.0 / (1.0 - std::exp(-beta * m));
  double tail_tol = std::max(1e-20, cfg.abs_tol * 1e-2);
  double P = tail_cutoff(beta - u, 2.0 * bose_cap / kFourPiSq, tail_tol);
  QuadratureConfig qc = cfg;
  if (t != 0.0) qc.max_panel_width = M_PI / (4.0 * std::abs(t));
  auto f = [&](double p) {
    double w = std::sqrt(p * p + m * m);
    double bose = 1.0 / (1.0 - std::exp(-beta * w));
    double ep = std::exp(-(beta + u) * w);  // negative-frequency member
    double em = std::exp(-(beta - u) * w);  // positive-frequency member
    Complex osc(std::cos(t * w), -std::sin(t * w));
    return (p * p / w) * sinc(p * r) * bose * (ep * osc + em * std::conj(osc)) / kFourPiSq;
  };
  return vac + integrate(f, 0.0, P, qc).value;
}

Complex kms_two_point_images(const ComplexTimeDisplacement& d, const FieldParams& params,
                             double tol) {
  if (params.vacuum()) return vac_two_point(d, params);
  if (!(params.mass > 0.0)) throw std::domain_error("kms_two_point_images: mass must be positive");
  const double beta = params.beta;
  if (d.u < 0.0 || d.u > beta) throw std::domain_error("kms_two_point_images: u outside [0, beta]");
  Complex acc{0.0, 0.0};
  int quiet = 0;
  const double m = params.mass;
  for (int n = 0; n < 400; ++n) {
    // image n is suppressed by ~e^{-m n beta}; its Bessel evaluation only
    // needs accuracy tol relative to the leading term
    double term_tol = std::min(1e-3, std::max(tol * std::exp(m * n * beta), 1e-13));
    Complex term = vac_two_point_tol({d.t, d.u + n * beta, d.r}, params, term_tol);
    if (n >= 1) term += vac_two_point_tol({-d.t, n * beta - d.u, d.r}, params, term_tol);
    acc += term;
    if (n >= 1) {
      if (std::abs(term) <= tol * std::max(std::abs(acc), 1e-300)) {
        if (++quiet >= 2) return acc;
      } else {
        quiet = 0;
      }
    }
  }
  throw std::runtime_error("kms_two_point_images: image sum did not converge");
}

std::pair<Complex, Complex> kms_boundary_check(double t, double r, const FieldParams& params) {
  if (params.vacuum()) throw std::domain_error("kms_boundary_check: requires finite beta");
  const double beta = params.beta;
  const int levels = 4;
  const double d0 = 0.1 * std::min(beta, 1.0);
  // Neville extrapolation of f(delta) to delta = 0 on delta_k = d0 / 2^k
  auto extrapolate = [&](const std::function<Complex(double)>& f) {
    std::vector<double> dl(levels);
    std::vector<Complex> v(levels);
    for (int k = 0; k < levels; ++k) {
      dl[k] = d0 / (1 << k);
      v[k] = f(dl[k]);
    }
    for (int j = 1; j < levels; ++j)
      for (int k = levels - 1; k >= j; --k)
        v[k] = v[k] + (v[k] - v[k - 1]) * (dl[k] / (dl[k - j] - dl[k]));
    return v[levels - 1];
  };
  Complex upper = extrapolate(
      [&](double delta) { return kms_two_point_images({t, beta - delta, r}, params); });
  Complex lower = extrapolate(
      [&](double delta) { return kms_two_point_images({-t, delta, r}, params); });
  return {upper, lower};
}

}  // namespace kmsqft
