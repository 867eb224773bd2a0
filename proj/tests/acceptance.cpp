// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit when any
// criterion fails. Usage: acceptance <cli-binary> <fixtures-dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kmsqft/cluster.hpp"
#include "kmsqft/kms.hpp"
#include "kmsqft/propagators.hpp"
#include "kmsqft/sword.hpp"

using namespace kmsqft;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int index, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed > budget_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("criterion %2d %-28s %s  (%.1fs%s%s)\n", index, name.c_str(),
              ok ? "PASS" : "FAIL", elapsed, detail.empty() ? "" : "; ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

double rel_diff(Complex a, Complex b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- criteria

bool propagator_oracle(std::string& detail) {
  double worst = 0.0;
  for (double m : {0.5, 1.0, 2.0})
    for (double u : {0.2, 1.0, 3.0})
      for (double r : {0.0, 1.0, 5.0}) {
        FieldParams params{m, std::numeric_limits<double>::infinity()};
        Complex closed = vac_two_point({0.0, u, r}, params);
        Complex quad = vac_two_point_quadrature({0.0, u, r}, params);
        worst = std::max(worst, rel_diff(closed, quad));
      }
  detail = "max rel err " + sci(worst);
  return worst < 1e-8;
}

bool kms_symmetry(std::string& detail) {
  FieldParams params{1.0, 2.0};
  double worst = 0.0;
  for (double u : linspace(0.1, 0.9, 10))
    for (double r : linspace(0.0, 4.0, 5)) {
      Complex a = kms_two_point_images({0.0, u * params.beta, r}, params, 1e-13);
      Complex b = kms_two_point_images({0.0, (1.0 - u) * params.beta, r}, params, 1e-13);
      worst = std::max(worst, rel_diff(a, b));
    }
  detail = "max rel asym " + sci(worst);
  return worst < 1e-10;
}

bool wick_oracle(std::string& detail) {
  std::mt19937 rng(20240819);
  std::uniform_int_distribution<int> npick(1, 4), apick(1, 4);
  std::uniform_real_distribution<double> upick(0.05, 0.95), xpick(-1.5, 1.5);
  FieldParams params{1.0, 1.0};
  double worst = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    CorrelationProblem p;
    p.state = params;
    int n = npick(rng);
    std::vector<double> us;
    for (int i = 0; i < n; ++i) us.push_back(upick(rng));
    std::sort(us.begin(), us.end());
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d x(xpick(rng), xpick(rng), xpick(rng));
      p.monomials.push_back({i, apick(rng), {0.0, us[i], x}, false});
    }
    Complex a = connected_correlation(p);
    Complex b = connected_oracle(p);
    double scale = std::max({1e-30, std::abs(a), std::abs(b)});
    worst = std::max(worst, std::abs(a - b) / scale);
  }
  detail = "max rel err " + sci(worst);
  return worst < 1e-12;
}

bool vacuum_cluster(std::string& detail) {
  FieldParams vac{1.0, std::numeric_limits<double>::infinity()};
  ClusterScan scan;
  scan.powers = {2, 2};
  scan.state = vac;
  scan.directions = {Eigen::Vector3d(1.0, 0.0, 0.0)};
  scan.u = {1.0};
  std::vector<double> radii = linspace(5.0, 10.0, 8);
  DecayFit spatial = fit_exponential(radii, [&] {
    std::vector<double> m;
    for (double r : radii) m.push_back(std::abs(cluster_function(scan, r)));
    return m;
  }());
  BoundReport bound = bound_check(scan, radii, 0.0, 1.0);
  ClusterScan ray = scan;
  ray.axis = ClusterScan::Axis::imaginary_time;
  DecayFit along_u = decay_fit(ray, radii);
  BoundReport ray_bound = bound_check(ray, radii, 0.0, 1.0);
  detail = "rates " + sci(spatial.rate) + ", " + sci(along_u.rate);
  return spatial.rate >= 1.9 && along_u.rate >= 1.9 && bound.passed && ray_bound.passed;
}

bool thermal_cluster(std::string& detail) {
  double worst_margin = 1e9, worst_rearr = 0.0;
  for (int n : {1, 2})
    for (double beta : {1.0, 2.0}) {
      ClusterScan scan;
      scan.powers = std::vector<int>(n + 1, 2);
      scan.state = {1.0, beta};
      for (int i = 0; i < n; ++i) {
        scan.directions.push_back(Eigen::Vector3d(1.0, 0.0, 0.0));
        scan.u.push_back(0.25 * beta + 0.4 * beta * i / std::max(1, n));
      }
      std::vector<double> radii = linspace(5.0, 10.0, 8);
      DecayFit fit = decay_fit(scan, radii);
      worst_margin = std::min(worst_margin, fit.rate / (1.0 / std::sqrt(double(n))));
      RearrangementReport rr = kms_rearrangement_check(scan, radii.front());
      worst_rearr = std::max(worst_rearr, rr.rel_diff);
    }
  detail = "min rate margin " + sci(worst_margin) + ", max rearr " +
           sci(worst_rearr);
  return worst_margin >= 0.95 && worst_rearr < 1e-6;
}

bool mass_shell(std::string& detail) {
  FieldParams params{1.0, std::numeric_limits<double>::infinity()};
  std::vector<double> radii = linspace(3.0, 8.0, 6), mags;
  for (double r : radii) mags.push_back(std::abs(mass_shell_integral(1.0, 0.5, r, 0.0, params)));
  DecayFit fit = fit_exponential(radii, mags);
  double worst_point = 0.0;
  double twopi3 = std::pow(2.0 * M_PI, 3);
  for (auto [u, r] : {std::array<double, 2>{1.0, 0.0}, std::array<double, 2>{0.7, 2.0}}) {
    Complex i0 = mass_shell_integral(0.0, u, r, 0.0, params);
    Complex d = vac_two_point({0.0, u, r}, params);
    worst_point = std::max(worst_point, rel_diff(i0, twopi3 * d));
  }
  detail = "rate " + sci(fit.rate) + ", point-source err " +
           sci(worst_point);
  return fit.rate >= 0.95 && worst_point < 1e-6;
}

bool thermal_mass_criterion(std::string& detail) {
  double worst_closed = 0.0, worst_scaling = 0.0;
  for (double beta : {0.5, 1.0, 2.0}) {
    double exact = 1.0 / (12.0 * beta * beta);
    worst_closed = std::max(worst_closed, std::abs(thermal_mass(0.0, beta) - exact) / exact);
  }
  for (double beta : {0.5, 1.0, 2.0})
    for (double m : {0.5, 1.0, 2.0}) {
      double lhs = thermal_mass(m, beta);
      double rhs = thermal_mass(m * beta, 1.0) / (beta * beta);
      worst_scaling = std::max(worst_scaling, std::abs(lhs - rhs) / std::abs(rhs));
    }
  detail = "closed-form err " + sci(worst_closed) + ", scaling err " +
           sci(worst_scaling);
  return worst_closed < 1e-6 && worst_scaling < 1e-8;
}

bool first_order_kms(std::string& detail) {
  FieldParams params{1.0, 1.0};
  WickMonomial A{0, 4, {0.0, 0.0, Eigen::Vector3d::Zero()}, false};
  InteractionSpec inter{4};

  TimeSmearing full0;
  full0.epsilon = 0.1;
  full0.mode = TimeSmearing::Mode::full;
  full0.profile = 0;
  TimeSmearing full1 = full0;
  full1.profile = 1;

  auto seq = first_order_sequence(A, inter, full0, {2, 3, 4, 5}, params);
  double last_rel = std::abs(seq[3].value - seq[2].value) / std::abs(seq[3].value);

  auto other = first_order_correction(A, inter, full1, {2}, params);
  double profile_rel = std::abs(other.value - seq[0].value) / std::abs(seq[0].value);

  auto shift = t_shift_invariance(A, inter, params, {-0.3, -0.15, -0.075});

  detail = "vanhove diff " + sci(last_rel) + ", shift spread " +
           sci(shift.max_rel_spread) + ", profile diff " +
           sci(profile_rel);
  return last_rel < 1e-4 && shift.max_rel_spread < 1e-4 && profile_rel < 1e-4;
}

TimeProfile triangle(const Rational& a, const Rational& b) {
  return TimeProfile({a, (a + b) / Rational(2), b}, {Rational(0), Rational(1), Rational(0)});
}

bool symbolic_corpus(std::string& detail) {
  Rational one(1);
  TimeProfile g = TimeProfile::cutoff(one);
  TimeProfile f = triangle(Rational(3), Rational(4));
  TimeProfile h = triangle(Rational(-4), Rational(-3));

  std::vector<std::optional<ProofTrace>> proofs;
  proofs.push_back(prove_equal(SWord::s(f + g + h),
                               SWord::s(f + g) * SWord::sInv(g) * SWord::s(g + h)));
  proofs.push_back(
      prove_equal(SWord::relative(g, f + h), SWord::relative(g, f) * SWord::relative(g, h)));
  proofs.push_back(prove_equal(SWord::relative(g + f, h), SWord::relative(g, h)));
  proofs.push_back(prove_equal(SWord::relative(g + h, f),
                               SWord::relative(g, h).inverse() * SWord::relative(g, f) *
                                   SWord::relative(g, h)));
  {
    TimeProfile gg = triangle(Rational(2), Rational(4)) + g + triangle(Rational(-4), Rational(-2));
    TimeProfile ff = triangle(Rational(1, 2), Rational(3, 2));
    proofs.push_back(prove_equal(SWord::relative(gg, ff),
                                 SWord::relative(g + triangle(Rational(-4), Rational(-2)), ff)));
  }
  proofs.push_back(cocycle_check(Rational(1, 4), Rational(1, 4), one));
  proofs.push_back(cocycle_check(Rational(1, 4), Rational(-1, 8), one));
  proofs.push_back(cocycle_check(Rational(1, 3), Rational(1, 6), one));
  proofs.push_back(chi_equivalence_check(TimeProfile::trapezoid(one, Rational(2)),
                                         TimeProfile::trapezoid(one, Rational(3, 2)),
                                         Rational(1, 4)));
  int proved = 0;
  for (auto& p : proofs)
    if (p.has_value() && p->replay() && !p->serialize().empty()) ++proved;
  detail = std::to_string(proved) + "/" + std::to_string(proofs.size()) + " traces replayed";
  return proved == (int)proofs.size();
}

// --------------------------------------------------------------- CLI suite

int run_cli(const std::string& cli, const std::string& args) {
  std::string cmd = "'" + cli + "' " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

bool run_suite(const std::string& cli, const fs::path& dir, std::string& detail) {
  fs::create_directories(dir);
  std::string d = dir.string();
  struct Step {
    std::string args;
    int expected;
  };
  std::vector<Step> steps = {
      {"propagator --mass 1 --beta 2 --reproducible -o " + d + "/prop_thermal.csv", 0},
      {"propagator --mass 1 --reproducible -o " + d + "/prop_vacuum.csv", 0},
      {"cluster --n 1 --mass 1 --r-min 5 --r-max 8 --r-count 4 --samples " + d +
           "/cluster_samples.csv --reproducible -o " + d + "/cluster_fit.json",
       0},
      {"kms thermal-mass --mass 0 --beta 1 --reproducible -o " + d + "/thermal_mass.json", 0},
      {"kms correct --obs phi4 --int phi4 --order 1 --vanhove 2..3 --beta 1 --mass 1 "
       "--reproducible -o " +
           d + "/correct.json",
       0},
      {"kms check reorder --beta 1 --mass 1 --reproducible -o " + d + "/reorder.json", 0},
      {"kms check shift --shifts -0.3 --beta 1 --mass 1 --reproducible -o " + d +
           "/shift.json",
       0},
      {"verify --trace-dir " + d + "/traces --reproducible -o " + d + "/verify.txt", 0},
  };
  for (const Step& s : steps) {
    int rc = run_cli(cli, s.args);
    if (rc != s.expected) {
      detail = "exit " + std::to_string(rc) + " from: " + s.args.substr(0, 40);
      return false;
    }
  }
  return true;
}

bool determinism(const std::string& cli, const std::string& fixtures, std::string& detail) {
  fs::path base = fs::temp_directory_path() / "kmsqft_acceptance";
  fs::remove_all(base);
  fs::path run1 = base / "run1", run2 = base / "run2";
  if (!run_suite(cli, run1, detail) || !run_suite(cli, run2, detail)) return false;
  // proof traces must also match the committed golden files
  fs::path golden = fs::path(fixtures) / "traces";
  if (fs::exists(golden)) {
    for (auto& entry : fs::directory_iterator(golden)) {
      fs::path mine = run1 / "traces" / entry.path().filename();
      if (read_file(entry.path()) != read_file(mine)) {
        detail = "trace differs from golden file: " + entry.path().filename().string();
        return false;
      }
    }
  }
  int compared = 0;
  for (auto& entry : fs::recursive_directory_iterator(run1)) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), run1);
    if (!fs::exists(run2 / rel)) {
      detail = "missing in second run: " + rel.string();
      return false;
    }
    if (read_file(entry.path()) != read_file(run2 / rel)) {
      detail = "byte mismatch: " + rel.string();
      return false;
    }
    ++compared;
  }
  detail = std::to_string(compared) + " files byte-identical";
  return compared > 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "./kmsqft";
  std::string fixtures = argc > 2 ? argv[2] : "fixtures";

  criterion(1, "propagator oracle", 10.0, propagator_oracle);
  criterion(2, "kms symmetry", 5.0, kms_symmetry);
  criterion(3, "wick oracle equivalence", 60.0, wick_oracle);
  criterion(4, "vacuum cluster decay", 60.0, vacuum_cluster);
  criterion(5, "thermal cluster decay", 600.0, thermal_cluster);
  criterion(6, "mass-shell integral", 300.0, mass_shell);
  criterion(7, "thermal mass", 10.0, thermal_mass_criterion);
  criterion(8, "first-order kms correction", 1800.0, first_order_kms);
  criterion(9, "symbolic corpus", 10.0, symbolic_corpus);
  criterion(10, "cli determinism", 1800.0,
            [&](std::string& detail) { return determinism(cli, fixtures, detail); });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
