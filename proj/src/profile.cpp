#include "kmsqft/profile.hpp"

#include <algorithm>
#include <set>

namespace kmsqft {

Rational TimeProfile::operator()(const Rational& t) const {
  if (xs_.empty() || t <= xs_.front() || t >= xs_.back()) {
    // boundary values are zero by the canonical-form invariant
    if (!xs_.empty() && (t == xs_.front() || t == xs_.back())) return Rational(0);
    return Rational(0);
  }
  auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
  size_t i = (size_t)(it - xs_.begin());  // xs_[i-1] <= t < xs_[i]
  const Rational& x0 = xs_[i - 1];
  const Rational& x1 = xs_[i];
  const Rational& v0 = vs_[i - 1];
  const Rational& v1 = vs_[i];
  return v0 + (v1 - v0) * (t - x0) / (x1 - x0);
}

void TimeProfile::canonicalize() {
  if (xs_.empty()) return;
  // trim leading/trailing zero-valued flat regions
  size_t lo = 0;
  while (lo + 1 < xs_.size() && vs_[lo] == Rational(0) && vs_[lo + 1] == Rational(0)) ++lo;
  size_t hi = xs_.size() - 1;
  while (hi > lo + 1 && vs_[hi] == Rational(0) && vs_[hi - 1] == Rational(0)) --hi;
  std::vector<Rational> xs(xs_.begin() + lo, xs_.begin() + hi + 1);
  std::vector<Rational> vs(vs_.begin() + lo, vs_.begin() + hi + 1);
  if (xs.size() <= 1 || std::all_of(vs.begin(), vs.end(), [](const Rational& v) { return v == Rational(0); })) {
    xs_.clear();
    vs_.clear();
    return;
  }
  // drop interior points that are collinear with their neighbours
  std::vector<Rational> cx{xs.front()}, cv{vs.front()};
  for (size_t i = 1; i + 1 < xs.size(); ++i) {
    const Rational sl = (vs[i] - cv.back()) / (xs[i] - cx.back());
    const Rational sr = (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]);
    if (sl != sr) {
      cx.push_back(xs[i]);
      cv.push_back(vs[i]);
    }
  }
  cx.push_back(xs.back());
  cv.push_back(vs.back());
  xs_ = std::move(cx);
  vs_ = std::move(cv);
}

std::optional<RationalInterval> TimeProfile::support() const {
  if (xs_.empty()) return std::nullopt;
  // canonical form already has no flat zero tails, so the support is the
  // breakpoint range
  return RationalInterval{xs_.front(), xs_.back()};
}

TimeProfile TimeProfile::translated(const Rational& dt) const {
  if (xs_.empty()) return *this;
  TimeProfile r(*this);
  for (auto& x : r.xs_) x += dt;
  return r;
}

TimeProfile TimeProfile::scaled(const Rational& c) const {
  if (xs_.empty() || c == Rational(0)) {
    if (c == Rational(0)) return TimeProfile();
    return *this;
  }
  TimeProfile r(*this);
  for (auto& v : r.vs_) v *= c;
  return r;
}

TimeProfile operator+(const TimeProfile& a, const TimeProfile& b) {
  if (a.isZero()) return b;
  if (b.isZero()) return a;
  std::set<Rational> pts(a.xs_.begin(), a.xs_.end());
  pts.insert(b.xs_.begin(), b.xs_.end());
  std::vector<Rational> xs(pts.begin(), pts.end());
  std::vector<Rational> vs;
  vs.reserve(xs.size());
  for (const auto& x : xs) vs.push_back(a(x) + b(x));
  // the sum may not vanish at the merged endpoints if one profile extends
  // beyond the other; it does vanish at the overall min/max by construction
  return TimeProfile(std::move(xs), std::move(vs));
}

TimeProfile operator-(const TimeProfile& a, const TimeProfile& b) {
  return a + b.scaled(Rational(-1));
}

bool TimeProfile::vanishesNearZero() const {
  if (xs_.empty()) return true;
  const Rational z(0);
  if (z <= xs_.front() || z >= xs_.back()) return true;  // outside support range
  // pick delta smaller than the distance to the nearest breakpoint != 0, so
  // (-delta, 0) and (0, delta) each lie inside a single linear segment
  Rational delta = xs_.back() - xs_.front();
  for (const auto& x : xs_)
    if (x != z) {
      Rational d = x < z ? z - x : x - z;
      if (d < delta) delta = d;
    }
  delta = delta / Rational(2);
  return operator()(z) == z && operator()(-delta) == z && operator()(delta) == z;
}

TimeProfile TimeProfile::chopSide(int sign) const {
  if (isZero()) return *this;
  if (!vanishesNearZero())
    throw std::domain_error("TimeProfile chop: profile does not vanish on a neighborhood of 0");
  std::vector<Rational> xs, vs;
  const Rational z(0);
  for (size_t i = 0; i < xs_.size(); ++i) {
    bool keep = sign < 0 ? xs_[i] < z : xs_[i] > z;
    if (keep) {
      xs.push_back(xs_[i]);
      vs.push_back(vs_[i]);
    }
  }
  if (xs.empty()) return TimeProfile();
  // close the kept side with a zero value; the profile vanishes near 0 so the
  // nearest kept breakpoint already carries value 0, but the far end of the
  // kept piece may need its original zero endpoint which the filter retained
  if (sign < 0 && vs.back() != Rational(0)) { xs.push_back(z); vs.push_back(Rational(0)); }
  if (sign > 0 && vs.front() != Rational(0)) { xs.insert(xs.begin(), z); vs.insert(vs.begin(), Rational(0)); }
  return TimeProfile(std::move(xs), std::move(vs));
}

TimeProfile TimeProfile::chopMinus() const { return chopSide(-1); }
TimeProfile TimeProfile::chopPlus() const { return chopSide(+1); }

bool causally_later(const TimeProfile& f, const TimeProfile& h) {
  auto sf = f.support();
  auto sh = h.support();
  if (!sf || !sh) return true;
  return sf->lo > sh->hi;
}

std::pair<TimeProfile, TimeProfile> psi_decomposition(const TimeProfile& chi, const Rational& t) {
  TimeProfile diff = chi.translated(t) - chi;
  TimeProfile minus = diff.chopMinus();  // throws if the humps merged at 0
  TimeProfile plus = diff.chopPlus();
  return {plus, minus};
}

}  // namespace kmsqft
