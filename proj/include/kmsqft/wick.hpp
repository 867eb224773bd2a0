#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "kmsqft/propagators.hpp"

namespace kmsqft {

/// Absolute location of a monomial: real time t, imaginary time u (its
/// translation alpha_{iu, x}) and spatial position x.
struct SpacetimePoint {
  double t = 0.0;
  double u = 0.0;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
};

/// Normal-ordered field power :phi^a: at a labeled point. vacuum_ordered
/// marks a monomial Wick-ordered with respect to the vacuum while the
/// surrounding state is thermal; its self-contractions then carry the
/// coincident-point difference c(beta) supplied by the problem.
struct WickMonomial {
  int label = 0;
  int power = 0;
  SpacetimePoint at;
  bool vacuum_ordered = false;
};

/// Loop-free multigraph on n+1 vertices (diagonal entries only for
/// vacuum_ordered vertices in mixed-ordering problems).
struct Multigraph {
  int vertices = 0;
  std::vector<int> mult;  // packed upper triangle including the diagonal

  static int packed_size(int n) { return n * (n + 1) / 2; }
  int idx(int i, int j) const {  // i <= j
    return i * vertices - i * (i - 1) / 2 + (j - i);
  }
  int lines(int i, int j) const { return i <= j ? mult[idx(i, j)] : mult[idx(j, i)]; }
  int degree(int i) const;
  bool connected() const;  // via off-diagonal lines; single vertex counts
};

struct CorrelationProblem {
  std::vector<WickMonomial> monomials;
  FieldParams state;
  double loop_value = 0.0;  // c(beta) for mixed-ordering problems
  int max_power = 6;
};

/// Evaluator for line (i, j), i < j, and loop values c at vertex i; injection
/// point for synthetic propagators in tests.
using LineFn = std::function<Complex(int, int)>;

/// All loop-free multigraphs with the prescribed vertex degrees, each once
/// (diagonal multiplicities allowed at vertices flagged in allow_loops).
std::vector<Multigraph> enumerate_graphs(const std::vector<int>& degrees,
                                         const std::vector<bool>& allow_loops = {});

/// Contraction value of one multigraph: the exact leg-pairing count
/// (prod_i a_i!) / (prod_{i<j} l_ij! prod_i 2^{l_ii} l_ii!) times the product
/// of line propagators (and loop_value per diagonal line).
Complex graph_weight(const Multigraph& g, const CorrelationProblem& problem);
Complex graph_weight(const Multigraph& g, const CorrelationProblem& problem, const LineFn& line);

/// omega(A_0 A_1 ... A_n) for the quasi-free state: sum of graph_weight over
/// enumerate_graphs.
Complex full_correlation(const CorrelationProblem& problem);
Complex full_correlation(const CorrelationProblem& problem, const LineFn& line);

/// Sum restricted to connected multigraphs.
Complex connected_correlation(const CorrelationProblem& problem);
Complex connected_correlation(const CorrelationProblem& problem, const LineFn& line);

/// Reference cumulant by Moebius inversion over set partitions,
/// omega^c(S) = omega(S) - sum_{A containing the first factor, A != S}
/// omega^c(A) omega(S \ A); capacity-guarded at 8 factors.
Complex connected_oracle(const CorrelationProblem& problem);
Complex connected_oracle(const CorrelationProblem& problem, const LineFn& line);

/// Brute-force perfect-matching oracle over labeled legs (same-vertex pairs
/// only at vacuum_ordered vertices); capacity-guarded at 14 legs.
Complex pairing_oracle(const CorrelationProblem& problem, const LineFn& line);

/// The state's line propagator for a problem: vacuum closed form, or the
/// thermal image sum; memoizes nothing (wrap for hot loops).
LineFn state_line_fn(const CorrelationProblem& problem);

}  // namespace kmsqft
