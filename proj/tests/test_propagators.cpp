#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kmsqft/bessel.hpp"
#include "kmsqft/propagators.hpp"

using namespace kmsqft;

namespace {
double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("dispersion relation") {
  CHECK(dispersion(0.0, {1.0}) == doctest::Approx(1.0));
  CHECK(dispersion(3.0, {4.0}) == doctest::Approx(5.0));
  CHECK(dispersion(2.0, {0.0}) == doctest::Approx(2.0));
}

TEST_CASE("complex K1 agrees with the standard library on the real axis") {
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0}) {
    Complex v = bessel_k1(Complex(x, 0.0));
    CHECK(std::abs(v.imag()) < 1e-13 * std::abs(v.real()));
    CHECK(v.real() == doctest::Approx(std::cyl_bessel_k(1.0, x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bessel_k1(Complex(-1.0, 0.0)), std::domain_error);
  // conjugation symmetry off the axis
  Complex z(0.7, 1.3);
  CHECK(std::abs(bessel_k1(z) - std::conj(bessel_k1(std::conj(z)))) < 1e-12);
}

TEST_CASE("vacuum closed form at the Bessel reference point") {
  Complex v = vac_two_point({0.0, 1.0, 0.0}, {1.0});
  double expected = std::cyl_bessel_k(1.0, 1.0) / (4.0 * M_PI * M_PI);
  CHECK(v.real() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("vacuum closed form vs quadrature across the parameter grid") {
  for (double m : {0.5, 1.0, 2.0})
    for (double u : {0.2, 1.0, 3.0})
      for (double r : {0.0, 1.0, 5.0}) {
        Complex closed = vac_two_point({0.0, u, r}, {m});
        Complex quad = vac_two_point_quadrature({0.0, u, r}, {m});
        CHECK_MESSAGE(rel_diff(closed, quad) < 1e-8,
                      "m=", m, " u=", u, " r=", r, " rel=", rel_diff(closed, quad));
      }
}

TEST_CASE("vacuum closed form vs quadrature at nonzero real time") {
  for (double t : {0.3, 1.0}) {
    Complex closed = vac_two_point({t, 1.0, 1.5}, {1.0});
    Complex quad = vac_two_point_quadrature({t, 1.0, 1.5}, {1.0});
    CHECK(rel_diff(closed, quad) < 1e-8);
  }
}

TEST_CASE("vacuum two-point depends only on s at t=0") {
  Complex a = vac_two_point({0.0, 0.7, 2.1}, {1.3});
  Complex b = vac_two_point({0.0, 2.1, 0.7}, {1.3});
  CHECK(rel_diff(a, b) < 1e-13);
}

TEST_CASE("vacuum exponential decay in imaginary time") {
  Complex near = vac_two_point({0.0, 1.0, 0.0}, {1.0});
  Complex far = vac_two_point({0.0, 10.0, 0.0}, {1.0});
  CHECK(std::abs(far) < std::exp(-9.0) * std::abs(near));
}

TEST_CASE("vacuum domain guards") {
  CHECK_THROWS_AS(vac_two_point({0.0, 0.0, 0.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(vac_two_point({0.0, -1.0, 1.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(vac_two_point({2.0, 0.0, 1.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(vac_two_point({0.0, 1.0, 1.0}, {0.0}), std::domain_error);
  // spacelike boundary value at u=0 is admissible
  CHECK_NOTHROW(vac_two_point({0.5, 0.0, 1.0}, {1.0}));
}

TEST_CASE("thermal two-point reduces to vacuum and respects the strip") {
  FieldParams vac{1.0};
  CHECK(rel_diff(kms_two_point({0.0, 1.0, 2.0}, vac), vac_two_point({0.0, 1.0, 2.0}, vac)) == 0.0);
  FieldParams th{1.0, 2.0};
  CHECK_THROWS_AS(kms_two_point({0.0, -0.1, 1.0}, th), std::domain_error);
  CHECK_THROWS_AS(kms_two_point({0.0, 2.5, 1.0}, th), std::domain_error);
}

TEST_CASE("KMS symmetry u <-> beta - u at t=0") {
  FieldParams th{1.0, 2.0};
  for (double u : {0.1, 0.3, 0.7, 1.0, 1.3, 1.9})
    for (double r : {0.0, 0.5, 2.0}) {
      Complex a = kms_two_point({0.0, u, r}, th);
      Complex b = kms_two_point({0.0, th.beta - u, r}, th);
      CHECK_MESSAGE(rel_diff(a, b) < 1e-10, "u=", u, " r=", r);
    }
}

TEST_CASE("thermal value at imaginary time is real and positive") {
  FieldParams th{1.0, 1.0};
  for (double u : {0.25, 0.5, 0.8})
    for (double r : {0.0, 1.0, 3.0}) {
      Complex v = kms_two_point({0.0, u, r}, th);
      CHECK(v.real() > 0.0);
      CHECK(std::abs(v.imag()) < 1e-12 * v.real());
    }
}

TEST_CASE("thermal correction shrinks monotonically as beta grows") {
  ComplexTimeDisplacement d{0.0, 0.4, 1.0};
  Complex vac = vac_two_point(d, {1.0});
  double prev = 1e300;
  for (double beta : {1.0, 2.0, 4.0, 8.0}) {
    double diff = std::abs(kms_two_point(d, {1.0, beta}) - vac);
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("image sum matches the quadrature route") {
  FieldParams th{1.0, 1.5};
  for (auto [t, u, r] : {std::array<double, 3>{0.0, 0.4, 0.0},
                         std::array<double, 3>{0.0, 0.75, 1.0},
                         std::array<double, 3>{0.5, 0.3, 2.0},
                         std::array<double, 3>{-0.7, 1.2, 0.5}}) {
    Complex a = kms_two_point({t, u, r}, th);
    Complex b = kms_two_point_images({t, u, r}, th);
    CHECK_MESSAGE(rel_diff(a, b) < 1e-9, "t=", t, " u=", u, " r=", r);
  }
}

TEST_CASE("KMS boundary identity") {
  {
    auto [upper, lower] = kms_boundary_check(0.0, 1.0, {1.0, 2.0});
    CHECK(rel_diff(upper, lower) < 1e-7);
  }
  {
    auto [upper, lower] = kms_boundary_check(1.0, 0.5, {1.0, 1.0});
    CHECK(rel_diff(upper, lower) < 1e-6);
  }
  {
    auto [upper, lower] = kms_boundary_check(0.0, 3.0, {1.0, 1.0});
    CHECK(rel_diff(upper, lower) < 1e-7);
  }
}
