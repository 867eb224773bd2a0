#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmsqft/profile.hpp"

namespace kmsqft {

/// One factor S(g)^{+1} or S(g)^{-1} of a formal S-matrix word. The common
/// spatial cutoff h is implicit; g is a time profile.
struct SFactor {
  TimeProfile profile;
  int exponent;  // +1 or -1
  friend bool operator==(const SFactor&, const SFactor&) = default;
};

/// Formal word in relative S-matrix generators. The empty word is the unit.
class SWord {
public:
  SWord() = default;
  explicit SWord(std::vector<SFactor> factors) : factors_(std::move(factors)) {}

  static SWord unit() { return SWord(); }
  static SWord s(const TimeProfile& g) { return SWord({{g, +1}}); }
  static SWord sInv(const TimeProfile& g) { return SWord({{g, -1}}); }
  /// Relative S-matrix S_g(f) = S(g)^{-1} S(g+f).
  static SWord relative(const TimeProfile& g, const TimeProfile& f) {
    return SWord({{g, -1}, {g + f, +1}});
  }

  SWord inverse() const;
  friend SWord operator*(const SWord& a, const SWord& b);

  /// Free time translation: shifts every profile by t.
  SWord translated(const Rational& t) const;

  bool empty() const { return factors_.empty(); }
  size_t size() const { return factors_.size(); }
  const std::vector<SFactor>& factors() const { return factors_; }

  friend bool operator==(const SWord&, const SWord&) = default;

private:
  std::vector<SFactor> factors_;
};

/// A single rewrite step, with the exact support facts that licensed it.
struct RewriteStep {
  std::string rule;   // "unit", "cancel", "merge", "merge_inv", "split", "split_inv"
  size_t position;    // leftmost factor index the rule acted on
  // support facts for causal rules: supp of the later and earlier part
  std::optional<RationalInterval> later_support;
  std::optional<RationalInterval> earlier_support;
  // operands of a split (the g and h pieces), needed for replay
  std::optional<TimeProfile> split_mid;
  std::optional<TimeProfile> split_late;
};

/// Replayable record of a rewrite from `start` to `end`.
struct ProofTrace {
  SWord start;
  SWord end;
  std::vector<RewriteStep> steps;
  bool closed = false;  // end reduced to the unit

  /// Re-applies every step from `start`, re-verifying each licensing support
  /// fact against exact profile supports. Returns false on any mismatch.
  bool replay() const;

  /// Line-oriented serialization (step index, rule, operand spans, support
  /// facts) for golden-file regression.
  std::string serialize() const;
};

struct RewriteOptions {
  size_t step_budget = 10000;
  /// Test hook: when set, the merge rule fires without checking its causal
  /// licensing condition (deliberately unsound, for negative controls).
  bool corrupt_rules = false;
};

/// Applies unit deletion, inverse cancellation and causal merge under a
/// deterministic leftmost-innermost strategy until no rule fires. Exceeding
/// the step budget throws std::runtime_error.
SWord normalize(const SWord& w, ProofTrace* trace = nullptr, const RewriteOptions& opt = {});

/// Attempts to reduce lhs * rhs^{-1} to the unit by normalize plus a
/// bounded-depth search over causal split positions. Returns a replayable
/// trace on success, nullopt when the search is exhausted (inconclusive).
std::optional<ProofTrace> prove_equal(const SWord& lhs, const SWord& rhs, int depth = 2,
                                      const RewriteOptions& opt = {});

/// Builds the co-cycle U(tau) = S_chi(psi_tau^-) with cutoff chi = cutoff(eps)
/// and proves the co-cycle relation U(t+s) = U(t) alpha_t(U(s)).
std::optional<ProofTrace> cocycle_check(const Rational& t, const Rational& s, const Rational& eps,
                                        const RewriteOptions& opt = {});

/// Proves the chi-equivalence U^{chi'}(t) = V^{-1} U^{chi}(t) alpha_t(V) with
/// V = S_chi(sigma^-), sigma^- = Theta^-(chi' - chi).
std::optional<ProofTrace> chi_equivalence_check(const TimeProfile& chi, const TimeProfile& chi_prime,
                                                const Rational& t, const RewriteOptions& opt = {});

}  // namespace kmsqft
