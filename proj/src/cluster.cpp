#include "kmsqft/cluster.hpp"

#include <stdexcept>

namespace kmsqft {

namespace {

void validate_scan(const ClusterScan& scan) {
  size_t n = scan.powers.size();
  if (n < 2) throw std::domain_error("cluster scan: need at least two vertices");
  if (scan.directions.size() != n - 1 || scan.u.size() != n - 1)
    throw std::domain_error("cluster scan: directions/u must cover vertices 1..n");
  if (!(scan.state.mass > 0.0)) throw std::domain_error("cluster scan: mass must be positive");
  for (size_t i = 1; i < scan.u.size(); ++i)
    if (!(scan.u[i - 1] <= scan.u[i])) throw std::domain_error("cluster scan: u not ordered");
  if (scan.axis == ClusterScan::Axis::spatial) {
    if (!(scan.u.front() > 0.0)) throw std::domain_error("cluster scan: u must start above 0");
    if (!scan.state.vacuum() && !(scan.u.back() < scan.state.beta))
      throw std::domain_error("cluster scan: u must stay below beta");
  } else {
    // imaginary-time ray: u holds the ray direction, scaled by r
    if (!(scan.u.front() > 0.0)) throw std::domain_error("cluster scan: ray must be increasing");
  }
}

}  // namespace

CorrelationProblem cluster_problem(const ClusterScan& scan, double r) {
  validate_scan(scan);
  size_t n = scan.powers.size() - 1;
  CorrelationProblem p;
  p.state = scan.state;
  p.monomials.push_back({0, scan.powers[0], {0.0, 0.0, Eigen::Vector3d::Zero()}, false});
  if (scan.axis == ClusterScan::Axis::spatial) {
    double norm2 = 0.0;
    for (const auto& d : scan.directions) norm2 += d.squaredNorm();
    double scale = r / std::sqrt(norm2);
    for (size_t i = 0; i < n; ++i)
      p.monomials.push_back({(int)(i + 1), scan.powers[i + 1],
                             {0.0, scan.u[i], scale * scan.directions[i]}, false});
  } else {
    double norm2 = 0.0;
    for (double ui : scan.u) norm2 += ui * ui;
    double scale = r / std::sqrt(norm2);
    for (size_t i = 0; i < n; ++i)
      p.monomials.push_back({(int)(i + 1), scan.powers[i + 1],
                             {0.0, scale * scan.u[i], Eigen::Vector3d::Zero()}, false});
  }
  return p;
}

Complex cluster_function(const ClusterScan& scan, double r) {
  return connected_correlation(cluster_problem(scan, r));
}

DecayFit fit_exponential(const std::vector<double>& radii, const std::vector<double>& magnitudes,
                         double noise_floor) {
  if (radii.size() != magnitudes.size()) throw std::invalid_argument("fit: size mismatch");
  std::vector<double> r, logf;
  for (size_t i = 0; i < radii.size(); ++i) {
    if (magnitudes[i] > 10.0 * noise_floor) {
      r.push_back(radii[i]);
      logf.push_back(std::log(magnitudes[i]));
    }
  }
  if (r.size() < 2) throw std::runtime_error("fit: fewer than 2 samples above the noise floor");
  Eigen::MatrixXd A(r.size(), 2);
  Eigen::VectorXd y(r.size());
  for (size_t i = 0; i < r.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = -r[i];
    y(i) = logf[i];
  }
  Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  DecayFit fit;
  fit.log_prefactor = coef(0);
  fit.rate = coef(1);
  fit.residual = std::sqrt((A * coef - y).squaredNorm() / (double)r.size());
  fit.window_lo = r.front();
  fit.window_hi = r.back();
  fit.samples_used = (int)r.size();
  return fit;
}

DecayFit decay_fit(const ClusterScan& scan, const std::vector<double>& radii, double noise_floor) {
  if (radii.size() < 4) throw std::invalid_argument("decay_fit: need at least 4 radii");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("decay_fit: radii not increasing");
  std::vector<double> mag;
  for (double r : radii) mag.push_back(std::abs(cluster_function(scan, r)));
  return fit_exponential(radii, mag, noise_floor);
}

BoundReport bound_check(const ClusterScan& scan, const std::vector<double>& radii, double R,
                        double rate) {
  BoundReport report;
  for (double r : radii)
    if (!(r > 2.0 * R)) throw std::domain_error("bound_check: radii must exceed 2R");
  std::vector<double> g;
  for (double r : radii) g.push_back(std::abs(cluster_function(scan, r)) * std::exp(rate * r));
  double cmax = 0.0;
  size_t argmax = 0;
  for (size_t i = 0; i < g.size(); ++i)
    if (g[i] > cmax) {
      cmax = g[i];
      argmax = i;
    }
  report.c_star = cmax;
  // windowed maxima over thirds of the sample list must not increase outward
  size_t w = std::max<size_t>(1, g.size() / 3);
  double prev = -1.0;
  bool monotone = true;
  size_t bad = 0;
  for (size_t start = 0; start < g.size(); start += w) {
    double wmax = 0.0;
    for (size_t i = start; i < std::min(start + w, g.size()); ++i) wmax = std::max(wmax, g[i]);
    if (prev >= 0.0 && wmax > prev * (1.0 + 1e-9)) {
      monotone = false;
      bad = start;
    }
    prev = wmax;
  }
  bool attained_early = argmax < w;
  report.passed = monotone && attained_early;
  if (!report.passed) {
    report.offending_radius = radii[monotone ? argmax : bad];
    report.detail = monotone ? "maximum of |F| e^{rate r} attained away from the smallest radii"
                             : "windowed maxima increase outward";
  }
  return report;
}

namespace {

// C-infinity mollifier on (-1, 1), zero outside
double mollifier(double s) {
  double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s2));
}

}  // namespace

Complex mass_shell_integral(double bump_R, double u, double r, double b, const FieldParams& params,
                            const QuadratureConfig& cfg) {
  if (!(u > 0.0)) throw std::domain_error("mass_shell_integral: requires u > 0");
  if (!(params.mass > 0.0)) throw std::domain_error("mass_shell_integral: mass must be positive");
  if (b < 0.0) throw std::domain_error("mass_shell_integral: b must be >= 0");
  const double m = params.mass;

  QuadratureConfig inner = cfg;
  inner.rel_tol = std::max(cfg.rel_tol, 1e-10);
  inner.abs_tol = std::max(cfg.abs_tol, 1e-15);

  double a_norm = 1.0, b_norm = 1.0;
  if (bump_R > 0.0) {
    a_norm = integrate_real([&](double s) { return mollifier(s / bump_R); }, -bump_R, bump_R, inner);
    b_norm = integrate_real(
        [&](double s) { return 4.0 * M_PI * s * s * mollifier(s / bump_R); }, 0.0, bump_R, inner);
  }
  auto a_hat = [&](double w) {
    if (bump_R == 0.0) return 1.0;
    return integrate_real([&](double s) { return mollifier(s / bump_R) * std::cos(w * s); },
                          -bump_R, bump_R, inner) /
           a_norm;
  };
  auto b_hat = [&](double k) {
    if (bump_R == 0.0) return 1.0;
    return integrate_real(
               [&](double s) {
                 double ks = k * s;
                 double sinc = std::abs(ks) < 1e-8 ? 1.0 - ks * ks / 6.0 : std::sin(ks) / ks;
                 return 4.0 * M_PI * s * s * mollifier(s / bump_R) * sinc;
               },
               0.0, bump_R, inner) /
           b_norm;
  };

  double tail_tol = std::max(1e-18, cfg.abs_tol * 1e-2);
  double P = tail_cutoff(u + b, 2.0 * M_PI, tail_tol);
  auto f = [&](double p) {
    double w = std::sqrt(p * p + m * m);
    double pr = p * r;
    double sinc = std::abs(pr) < 1e-8 ? 1.0 : std::sin(pr) / pr;
    return Complex(4.0 * M_PI * p * p / (2.0 * w) * a_hat(w) * b_hat(p) * sinc *
                       std::exp(-(u + b) * w),
                   0.0);
  };
  QuadratureConfig outer = cfg;
  outer.rel_tol = std::max(cfg.rel_tol, 1e-9);
  outer.abs_tol = std::max(cfg.abs_tol, 1e-14);
  return integrate(f, 0.0, P, outer).value;
}

RearrangementReport kms_rearrangement_check(const ClusterScan& scan, double r) {
  if (scan.state.vacuum()) throw std::domain_error("kms_rearrangement_check: requires a thermal state");
  CorrelationProblem p = cluster_problem(scan, r);
  RearrangementReport report;
  report.original = connected_correlation(p);

  // cycle A_0 to the end: omega^c(A_0 A_1 .. A_n) = omega^c(A_1' .. A_n' A_0')
  // with the tuple shifted by (-u_1, -x_1) and A_0 moved to imaginary time beta
  const double beta = scan.state.beta;
  const auto& ms = p.monomials;
  double u1 = ms[1].at.u;
  Eigen::Vector3d x1 = ms[1].at.x;
  CorrelationProblem q;
  q.state = p.state;
  for (size_t i = 1; i < ms.size(); ++i)
    q.monomials.push_back(
        {(int)(i - 1), ms[i].power, {ms[i].at.t, ms[i].at.u - u1, ms[i].at.x - x1}, false});
  q.monomials.push_back(
      {(int)ms.size() - 1, ms[0].power, {ms[0].at.t, beta - u1, ms[0].at.x - x1}, false});
  report.rearranged = connected_correlation(q);
  double scale = std::max(std::abs(report.original), std::abs(report.rearranged));
  report.rel_diff = scale == 0.0 ? 0.0 : std::abs(report.original - report.rearranged) / scale;
  return report;
}

}  // namespace kmsqft
