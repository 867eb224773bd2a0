#include "kmsqft/sword.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kmsqft {

SWord SWord::inverse() const {
  std::vector<SFactor> f(factors_.rbegin(), factors_.rend());
  for (auto& x : f) x.exponent = -x.exponent;
  return SWord(std::move(f));
}

SWord operator*(const SWord& a, const SWord& b) {
  std::vector<SFactor> f = a.factors_;
  f.insert(f.end(), b.factors_.begin(), b.factors_.end());
  return SWord(std::move(f));
}

SWord SWord::translated(const Rational& t) const {
  std::vector<SFactor> f = factors_;
  for (auto& x : f) x.profile = x.profile.translated(t);
  return SWord(std::move(f));
}

namespace {

std::string intervalStr(const std::optional<RationalInterval>& iv) {
  if (!iv) return "empty";
  return "[" + iv->lo.str() + "," + iv->hi.str() + "]";
}

std::string profileStr(const TimeProfile& p) {
  if (p.isZero()) return "0";
  std::ostringstream os;
  const auto& xs = p.breakpoints();
  const auto& vs = p.values();
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ' ';
    os << xs[i] << ':' << vs[i];
  }
  return os.str();
}

// Finds the first rule instance under the leftmost strategy. Returns the
// rewritten word through `out` and the step describing it, or false if no
// rule fires.
bool findStep(const SWord& w, const RewriteOptions& opt, SWord& out, RewriteStep& step) {
  const auto& f = w.factors();
  // unit deletion
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i].profile.isZero()) {
      auto v = f;
      v.erase(v.begin() + i);
      out = SWord(std::move(v));
      step = {"unit", i, {}, {}, {}, {}};
      return true;
    }
  }
  // inverse cancellation
  for (size_t i = 0; i + 1 < f.size(); ++i) {
    if (f[i].profile == f[i + 1].profile && f[i].exponent == -f[i + 1].exponent) {
      auto v = f;
      v.erase(v.begin() + i, v.begin() + i + 2);
      out = SWord(std::move(v));
      step = {"cancel", i, {}, {}, {}, {}};
      return true;
    }
  }
  // causal merge S(a) S(b)^-1 S(c) -> S(a-b+c), licensed when a-b is strictly
  // later than c-b; mirrored version for the inverted triple
  for (size_t i = 0; i + 2 < f.size(); ++i) {
    if (f[i].exponent == +1 && f[i + 1].exponent == -1 && f[i + 2].exponent == +1) {
      TimeProfile late = f[i].profile - f[i + 1].profile;
      TimeProfile early = f[i + 2].profile - f[i + 1].profile;
      if (opt.corrupt_rules || causally_later(late, early)) {
        auto v = f;
        SFactor merged{late + f[i + 2].profile, +1};
        v.erase(v.begin() + i, v.begin() + i + 3);
        v.insert(v.begin() + i, merged);
        out = SWord(std::move(v));
        step = {"merge", i, late.support(), early.support(), {}, {}};
        return true;
      }
    }
    if (f[i].exponent == -1 && f[i + 1].exponent == +1 && f[i + 2].exponent == -1) {
      TimeProfile late = f[i + 2].profile - f[i + 1].profile;
      TimeProfile early = f[i].profile - f[i + 1].profile;
      if (opt.corrupt_rules || causally_later(late, early)) {
        auto v = f;
        SFactor merged{late + f[i].profile, -1};
        v.erase(v.begin() + i, v.begin() + i + 3);
        v.insert(v.begin() + i, merged);
        out = SWord(std::move(v));
        step = {"merge_inv", i, late.support(), early.support(), {}, {}};
        return true;
      }
    }
  }
  return false;
}

// Applies a recorded step, re-verifying its licensing facts. Returns false on
// any mismatch.
bool applyStep(SWord& w, const RewriteStep& step) {
  auto f = w.factors();
  size_t i = step.position;
  if (step.rule == "unit") {
    if (i >= f.size() || !f[i].profile.isZero()) return false;
    f.erase(f.begin() + i);
  } else if (step.rule == "cancel") {
    if (i + 1 >= f.size() || f[i].profile != f[i + 1].profile ||
        f[i].exponent != -f[i + 1].exponent)
      return false;
    f.erase(f.begin() + i, f.begin() + i + 2);
  } else if (step.rule == "merge" || step.rule == "merge_inv") {
    if (i + 2 >= f.size()) return false;
    bool inv = step.rule == "merge_inv";
    int e0 = inv ? -1 : +1;
    if (f[i].exponent != e0 || f[i + 1].exponent != -e0 || f[i + 2].exponent != e0) return false;
    const TimeProfile& outerLate = inv ? f[i + 2].profile : f[i].profile;
    const TimeProfile& outerEarly = inv ? f[i].profile : f[i + 2].profile;
    TimeProfile late = outerLate - f[i + 1].profile;
    TimeProfile early = outerEarly - f[i + 1].profile;
    if (!causally_later(late, early)) return false;
    if (late.support() != step.later_support || early.support() != step.earlier_support)
      return false;
    SFactor merged{late + outerEarly, e0};
    f.erase(f.begin() + i, f.begin() + i + 3);
    f.insert(f.begin() + i, merged);
  } else if (step.rule == "split" || step.rule == "split_inv") {
    if (i >= f.size() || !step.split_mid || !step.split_late) return false;
    bool inv = step.rule == "split_inv";
    int e0 = inv ? -1 : +1;
    if (f[i].exponent != e0) return false;
    const TimeProfile& w0 = f[i].profile;
    TimeProfile g = *step.split_mid;
    TimeProfile late = *step.split_late;
    TimeProfile early = w0 - g - late;
    if (!causally_later(late, early)) return false;
    SFactor a{late + g, e0}, b{g, -e0}, c{g + early, e0};
    f.erase(f.begin() + i);
    if (inv) {
      f.insert(f.begin() + i, {c, b, a});
    } else {
      f.insert(f.begin() + i, {a, b, c});
    }
  } else {
    return false;
  }
  w = SWord(std::move(f));
  return true;
}

}  // namespace

bool ProofTrace::replay() const {
  SWord w = start;
  for (const auto& s : steps)
    if (!applyStep(w, s)) return false;
  if (!(w == end)) return false;
  if (closed && !w.empty()) return false;
  return true;
}

std::string ProofTrace::serialize() const {
  std::ostringstream os;
  os << "start " << start.size() << " factors\n";
  for (size_t i = 0; i < start.size(); ++i) {
    const auto& fa = start.factors()[i];
    os << "factor " << i << " exp " << (fa.exponent > 0 ? "+1" : "-1") << " supp "
       << intervalStr(fa.profile.support()) << " profile " << profileStr(fa.profile) << "\n";
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    os << "step " << i << " " << s.rule << " pos " << s.position;
    if (s.later_support || s.earlier_support)
      os << " later " << intervalStr(s.later_support) << " earlier "
         << intervalStr(s.earlier_support);
    if (s.split_mid) os << " mid " << profileStr(*s.split_mid);
    if (s.split_late) os << " late " << profileStr(*s.split_late);
    os << "\n";
  }
  os << "end " << end.size() << " factors\n";
  os << "closed " << (closed ? 1 : 0) << "\n";
  return os.str();
}

SWord normalize(const SWord& w, ProofTrace* trace, const RewriteOptions& opt) {
  SWord cur = w;
  if (trace) {
    trace->start = w;
    trace->steps.clear();
  }
  size_t budget = opt.step_budget;
  SWord next;
  RewriteStep step;
  while (findStep(cur, opt, next, step)) {
    if (budget-- == 0) throw std::runtime_error("normalize: step budget exceeded");
    cur = next;
    if (trace) trace->steps.push_back(step);
  }
  if (trace) {
    trace->end = cur;
    trace->closed = cur.empty();
  }
  return cur;
}

namespace {

// Midpoint of the widest interior zero-gap of a profile, if any: a rational c
// with the profile vanishing on a neighborhood of c and nonzero mass on both
// sides. Used to generate causal split candidates.
std::optional<Rational> gapCut(const TimeProfile& p) {
  if (p.isZero()) return std::nullopt;
  const auto& xs = p.breakpoints();
  const auto& vs = p.values();
  std::optional<Rational> best;
  Rational bestWidth(0);
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (vs[i] == Rational(0) && vs[i + 1] == Rational(0) && i > 0 && i + 2 < xs.size()) {
      Rational width = xs[i + 1] - xs[i];
      if (width > bestWidth) {
        bestWidth = width;
        best = (xs[i] + xs[i + 1]) / Rational(2);
      }
    }
  }
  return best;
}

bool search(const SWord& w, int depth, const RewriteOptions& opt,
            std::vector<RewriteStep>& steps) {
  ProofTrace t;
  SWord n = normalize(w, &t, opt);
  steps.insert(steps.end(), t.steps.begin(), t.steps.end());
  if (n.empty()) return true;
  if (depth <= 0) return false;
  // try causal splits of each factor around an interior support gap, using
  // every other factor's profile (and zero) as the middle piece
  const auto& f = n.factors();
  for (size_t i = 0; i < f.size(); ++i) {
    std::vector<TimeProfile> mids{TimeProfile::zero()};
    for (size_t j = 0; j < f.size(); ++j)
      if (j != i) mids.push_back(f[j].profile);
    for (const auto& g : mids) {
      TimeProfile d = f[i].profile - g;
      auto cut = gapCut(d);
      if (!cut) continue;
      TimeProfile late, early;
      try {
        late = d.translated(-*cut).chopPlus().translated(*cut);
        early = d.translated(-*cut).chopMinus().translated(*cut);
      } catch (const std::domain_error&) {
        continue;
      }
      if (!causally_later(late, early)) continue;
      bool inv = f[i].exponent < 0;
      RewriteStep step{inv ? "split_inv" : "split", i, {}, {}, g, late};
      SWord cand = n;
      if (!applyStep(cand, step)) continue;
      size_t mark = steps.size();
      steps.push_back(step);
      if (search(cand, depth - 1, opt, steps)) return true;
      steps.resize(mark);
    }
  }
  return false;
}

}  // namespace

std::optional<ProofTrace> prove_equal(const SWord& lhs, const SWord& rhs, int depth,
                                      const RewriteOptions& opt) {
  SWord goal = lhs * rhs.inverse();
  ProofTrace trace;
  trace.start = goal;
  if (!search(goal, depth, opt, trace.steps)) return std::nullopt;
  trace.end = SWord::unit();
  trace.closed = true;
  // a trace produced under corrupted rules will not survive honest replay
  if (!trace.replay()) return std::nullopt;
  return trace;
}

std::optional<ProofTrace> cocycle_check(const Rational& t, const Rational& s, const Rational& eps,
                                        const RewriteOptions& opt) {
  TimeProfile chi = TimeProfile::cutoff(eps);
  auto mkU = [&](const Rational& tau) {
    auto [plus, minus] = psi_decomposition(chi, tau);
    (void)plus;
    return SWord::relative(chi, minus);
  };
  SWord lhs = mkU(t + s);
  SWord rhs = mkU(t) * mkU(s).translated(t);
  return prove_equal(lhs, rhs, 2, opt);
}

std::optional<ProofTrace> chi_equivalence_check(const TimeProfile& chi, const TimeProfile& chi_prime,
                                                const Rational& t, const RewriteOptions& opt) {
  TimeProfile sigmaMinus = (chi_prime - chi).chopMinus();
  SWord v = SWord::relative(chi, sigmaMinus);
  auto mkU = [&](const TimeProfile& c) {
    auto [plus, minus] = psi_decomposition(c, t);
    (void)plus;
    return SWord::relative(c, minus);
  };
  SWord lhs = mkU(chi_prime);
  SWord rhs = v.inverse() * mkU(chi) * v.translated(t);
  return prove_equal(lhs, rhs, 2, opt);
}

}  // namespace kmsqft
