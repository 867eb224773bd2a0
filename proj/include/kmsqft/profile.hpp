#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kmsqft/rational.hpp"

namespace kmsqft {

/// Closed rational interval [lo, hi].
struct RationalInterval {
  Rational lo;
  Rational hi;
  friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

/// Continuous piecewise-linear function of time with rational breakpoints,
/// identically zero outside its breakpoint range. Closed under +, -,
/// rational scaling, time translation and one-sided chops at t = 0.
///
/// Stored in canonical form: strictly increasing breakpoints, zero values at
/// both ends, no redundant collinear interior points. Two profiles are equal
/// as functions iff their canonical forms compare equal.
class TimeProfile {
public:
  TimeProfile() = default;

  /// Breakpoints xs (strictly increasing) with values vs; vs.front() and
  /// vs.back() must be 0 so the zero-extension is continuous.
  TimeProfile(std::vector<Rational> xs, std::vector<Rational> vs)
      : xs_(std::move(xs)), vs_(std::move(vs)) {
    if (xs_.size() != vs_.size()) throw std::invalid_argument("TimeProfile: size mismatch");
    for (size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i - 1] < xs_[i])) throw std::invalid_argument("TimeProfile: breakpoints not increasing");
    if (!xs_.empty() && (vs_.front() != Rational(0) || vs_.back() != Rational(0)))
      throw std::invalid_argument("TimeProfile: must vanish at the ends");
    canonicalize();
  }

  static TimeProfile zero() { return TimeProfile(); }

  /// The canonical time cutoff: 1 on [-eps, eps], 0 outside (-2eps, 2eps),
  /// linear in between.
  static TimeProfile cutoff(const Rational& eps) {
    Rational e2 = eps * Rational(2);
    return TimeProfile({-e2, -eps, eps, e2}, {0, 1, 1, 0});
  }

  /// Trapezoid that is 1 on [-inner, inner] and 0 outside (-outer, outer).
  static TimeProfile trapezoid(const Rational& inner, const Rational& outer) {
    if (!(Rational(0) < inner && inner < outer))
      throw std::invalid_argument("trapezoid: need 0 < inner < outer");
    return TimeProfile({-outer, -inner, inner, outer}, {0, 1, 1, 0});
  }

  bool isZero() const { return xs_.empty(); }

  Rational operator()(const Rational& t) const;

  /// Minimal closed interval outside which the profile vanishes identically;
  /// nullopt for the zero profile.
  std::optional<RationalInterval> support() const;

  TimeProfile translated(const Rational& dt) const;
  TimeProfile scaled(const Rational& c) const;

  friend TimeProfile operator+(const TimeProfile& a, const TimeProfile& b);
  friend TimeProfile operator-(const TimeProfile& a, const TimeProfile& b);
  TimeProfile operator-() const { return scaled(Rational(-1)); }

  /// Restriction to t < 0 (Theta^-) or t > 0 (Theta^+). Requires the profile
  /// to vanish on an open neighborhood of 0 so the result stays continuous
  /// piecewise-linear; throws std::domain_error otherwise.
  TimeProfile chopMinus() const;
  TimeProfile chopPlus() const;

  friend bool operator==(const TimeProfile&, const TimeProfile&) = default;

  const std::vector<Rational>& breakpoints() const { return xs_; }
  const std::vector<Rational>& values() const { return vs_; }

private:
  void canonicalize();
  // returns +1/0/-1 classification of whether f vanishes on a neighborhood of 0
  bool vanishesNearZero() const;
  TimeProfile chopSide(int sign) const;

  std::vector<Rational> xs_;
  std::vector<Rational> vs_;
};

/// True iff supp(f) lies strictly later in time than supp(h)
/// (inf supp f > sup supp h). Empty supports count as causally later.
bool causally_later(const TimeProfile& f, const TimeProfile& h);

/// Decomposition chi_t - chi = psi_plus + psi_minus with
/// psi_minus = Theta^-(chi_t - chi) supported strictly below 0 and
/// psi_plus = Theta^+(chi_t - chi) strictly above. Throws if |t| is so large
/// that the two humps of chi_t - chi merge at 0.
std::pair<TimeProfile, TimeProfile> psi_decomposition(const TimeProfile& chi, const Rational& t);

}  // namespace kmsqft
