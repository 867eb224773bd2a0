#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmsqft/cluster.hpp"

using namespace kmsqft;

namespace {

double rel_diff(Complex a, Complex b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Eigen::Vector3d ex() { return {1.0, 0.0, 0.0}; }

ClusterScan pair_scan(FieldParams state, double u1 = 1.0) {
  ClusterScan s;
  s.powers = {2, 2};
  s.state = state;
  s.directions = {ex()};
  s.u = {u1};
  return s;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

}  // namespace

TEST_CASE("cluster function reduces to the pair correlator") {
  FieldParams vac{1.0};
  ClusterScan s = pair_scan(vac);
  Complex f0 = cluster_function(s, 0.0);
  Complex d = vac_two_point({0.0, 1.0, 0.0}, vac);
  CHECK(rel_diff(f0, 2.0 * d * d) < 1e-12);
  // degree mismatch vanishes identically
  s.powers = {1, 3};
  CHECK(std::abs(cluster_function(s, 2.0)) == 0.0);
}

TEST_CASE("triangle cluster matches the partition oracle") {
  ClusterScan s;
  s.powers = {2, 2, 2};
  s.state = {1.0, 2.0};
  s.directions = {ex(), ex()};
  s.u = {0.5, 1.0};
  for (double r : {1.0, 3.0}) {
    CorrelationProblem p = cluster_problem(s, r);
    CHECK(rel_diff(connected_correlation(p), connected_oracle(p)) < 1e-12);
    CHECK(rel_diff(cluster_function(s, r), connected_correlation(p)) < 1e-14);
  }
}

TEST_CASE("exponential fit on synthetic data") {
  std::vector<double> radii = linspace(1.0, 6.0, 8), mags;
  for (double r : radii) mags.push_back(3.0 * std::exp(-2.0 * r));
  DecayFit fit = fit_exponential(radii, mags);
  CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.log_prefactor == doctest::Approx(std::log(3.0)).epsilon(1e-6));
  CHECK(fit.residual < 1e-10);
  CHECK(fit.samples_used == 8);
}

TEST_CASE("vacuum pair cluster decays at twice the mass") {
  FieldParams vac{1.0};
  ClusterScan s = pair_scan(vac);
  DecayFit fit = decay_fit(s, linspace(5.0, 10.0, 8));
  CHECK(fit.rate >= 1.9);
  // imaginary-time ray shows the same decay (r_e includes u for the vacuum)
  ClusterScan ray = s;
  ray.axis = ClusterScan::Axis::imaginary_time;
  DecayFit ufit = decay_fit(ray, linspace(5.0, 10.0, 8));
  CHECK(ufit.rate >= 1.9);
}

TEST_CASE("thermal pair cluster keeps the spatial decay rate") {
  ClusterScan s = pair_scan({1.0, 1.0}, 0.5);
  DecayFit fit = decay_fit(s, linspace(5.0, 10.0, 8));
  CHECK(fit.rate >= 1.9);
}

TEST_CASE("uniform bound holds and the negative control trips") {
  FieldParams vac{1.0};
  ClusterScan s = pair_scan(vac);
  std::vector<double> radii = linspace(5.0, 10.0, 9);
  BoundReport ok = bound_check(s, radii, 0.0, 1.0);  // rate m/sqrt(1)
  CHECK(ok.passed);
  CHECK(ok.c_star > 0.0);
  // an inflated rate makes |F| e^{rate r} grow outward
  DecayFit fit = decay_fit(s, radii);
  BoundReport bad = bound_check(s, radii, 0.0, 1.5 * fit.rate);
  CHECK(!bad.passed);
  CHECK(!bad.detail.empty());
}

TEST_CASE("point-source mass-shell integral matches the closed form") {
  FieldParams params{1.0};
  for (auto [u, r] : {std::array<double, 2>{1.0, 0.0}, std::array<double, 2>{0.7, 2.0}}) {
    Complex i0 = mass_shell_integral(0.0, u, r, 0.0, params);
    Complex d = vac_two_point({0.0, u, r}, params);
    double twopi3 = std::pow(2.0 * M_PI, 3);
    CHECK(rel_diff(i0, twopi3 * d) < 1e-6);
  }
}

TEST_CASE("damping factor suppresses the mass-shell integral monotonically") {
  FieldParams params{1.0};
  Complex base = mass_shell_integral(1.0, 1.0, 2.0, 0.0, params);
  double prev = std::abs(base);
  for (double b : {0.5, 1.0, 2.0}) {
    Complex v = mass_shell_integral(1.0, 1.0, 2.0, b, params);
    CHECK(std::abs(v) < prev);
    CHECK(std::abs(v) <= std::exp(-b * params.mass) * std::abs(base) * (1.0 + 1e-9));
    prev = std::abs(v);
  }
}

TEST_CASE("bump mass-shell integral decays at the mass rate") {
  FieldParams params{1.0};
  // sweep r = sqrt(u^2 + |x|^2) along a diagonal ray with u = |x|
  std::vector<double> radii = linspace(3.0, 8.0, 6), mags;
  for (double r : radii) {
    double u = r / std::sqrt(2.0), x = r / std::sqrt(2.0);
    mags.push_back(std::abs(mass_shell_integral(1.0, u, x, 0.0, params)));
  }
  DecayFit fit = fit_exponential(radii, mags);
  CHECK(fit.rate >= 0.95);
}

TEST_CASE("KMS rearrangement symmetry of thermal clusters") {
  ClusterScan s = pair_scan({1.0, 2.0}, 0.5);
  for (double r : {0.5, 2.0, 5.0}) {
    RearrangementReport rep = kms_rearrangement_check(s, r);
    CHECK(rep.rel_diff < 1e-6);
  }
  // symmetric point u = beta/2 reduces to the propagator symmetry
  ClusterScan sym = pair_scan({1.0, 2.0}, 1.0);
  CHECK(kms_rearrangement_check(sym, 1.5).rel_diff < 1e-10);
  // triangle case
  ClusterScan tri;
  tri.powers = {2, 2, 2};
  tri.state = {1.0, 2.0};
  tri.directions = {ex(), Eigen::Vector3d(0.0, 1.0, 0.0)};
  tri.u = {0.5, 1.2};
  CHECK(kms_rearrangement_check(tri, 2.0).rel_diff < 1e-6);
}
