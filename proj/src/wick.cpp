#include "kmsqft/wick.hpp"

#include <map>
#include <stdexcept>

namespace kmsqft {

int Multigraph::degree(int i) const {
  int d = 2 * lines(i, i);  // a loop uses two legs
  for (int j = 0; j < vertices; ++j)
    if (j != i) d += lines(i, j);
  return d;
}

bool Multigraph::connected() const {
  if (vertices <= 1) return true;
  std::vector<int> parent(vertices);
  for (int i = 0; i < vertices; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < vertices; ++i)
    for (int j = i + 1; j < vertices; ++j)
      if (lines(i, j) > 0) parent[find(i)] = find(j);
  int root = find(0);
  for (int i = 1; i < vertices; ++i)
    if (find(i) != root) return false;
  return true;
}

namespace {

void validate(const CorrelationProblem& p) {
  for (size_t i = 0; i < p.monomials.size(); ++i) {
    if (p.monomials[i].power < 0 || p.monomials[i].power > p.max_power)
      throw std::domain_error("wick: power outside [0, max_power]");
    if (i > 0 && p.monomials[i].at.u < p.monomials[i - 1].at.u)
      throw std::domain_error("wick: imaginary times must be ordered along the simplex");
  }
  if (!p.monomials.empty() && !p.state.vacuum()) {
    double span = p.monomials.back().at.u - p.monomials.front().at.u;
    if (!(span < p.state.beta))
      throw std::domain_error("wick: imaginary-time span must stay below beta");
  }
}

void backtrack(const std::vector<int>& degrees, const std::vector<bool>& loops, int i, int j,
               std::vector<int>& res, Multigraph& g, std::vector<Multigraph>& out) {
  int n = g.vertices;
  if (i == n) {
    out.push_back(g);
    return;
  }
  if (j == n) {
    if (res[i] != 0) return;  // vertex i fully processed, leftover legs unmatchable
    backtrack(degrees, loops, i + 1, i + 1, res, g, out);
    return;
  }
  if (i == j) {
    int cap = loops.empty() || !loops[i] ? 0 : res[i] / 2;
    for (int l = 0; l <= cap; ++l) {
      g.mult[g.idx(i, i)] = l;
      res[i] -= 2 * l;
      backtrack(degrees, loops, i, j + 1, res, g, out);
      res[i] += 2 * l;
    }
    g.mult[g.idx(i, i)] = 0;
    return;
  }
  int cap = std::min(res[i], res[j]);
  // the last partner of vertex i must absorb the remaining legs
  int lo = (j == n - 1) ? res[i] : 0;
  if (lo > cap) return;
  for (int l = lo; l <= cap; ++l) {
    g.mult[g.idx(i, j)] = l;
    res[i] -= l;
    res[j] -= l;
    backtrack(degrees, loops, i, j + 1, res, g, out);
    res[i] += l;
    res[j] += l;
  }
  g.mult[g.idx(i, j)] = 0;
}

double factorial(int n) {
  static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800,
                                 39916800, 479001600};
  return table[n];
}

Complex memoized(const LineFn& line, std::map<std::pair<int, int>, Complex>& cache, int i, int j) {
  auto key = std::make_pair(i, j);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Complex v = line(i, j);
  cache.emplace(key, v);
  return v;
}

}  // namespace

LineFn state_line_fn(const CorrelationProblem& problem) {
  return [&problem](int i, int j) {
    const SpacetimePoint& a = problem.monomials[i].at;
    const SpacetimePoint& b = problem.monomials[j].at;
    ComplexTimeDisplacement d{b.t - a.t, b.u - a.u, (b.x - a.x).norm()};
    if (problem.state.vacuum()) return vac_two_point(d, problem.state);
    return kms_two_point_images(d, problem.state, 1e-13);
  };
}

std::vector<Multigraph> enumerate_graphs(const std::vector<int>& degrees,
                                         const std::vector<bool>& allow_loops) {
  for (int d : degrees)
    if (d < 0) throw std::domain_error("enumerate_graphs: negative degree");
  int n = (int)degrees.size();
  std::vector<Multigraph> out;
  long long total = 0;
  for (int d : degrees) total += d;
  if (total % 2 != 0) return out;
  Multigraph g;
  g.vertices = n;
  g.mult.assign(Multigraph::packed_size(n), 0);
  std::vector<int> res = degrees;
  backtrack(degrees, allow_loops, 0, 0, res, g, out);
  return out;
}

Complex graph_weight(const Multigraph& g, const CorrelationProblem& problem, const LineFn& line) {
  double comb = 1.0;
  for (int i = 0; i < g.vertices; ++i) comb *= factorial(problem.monomials[i].power);
  Complex prop{1.0, 0.0};
  for (int i = 0; i < g.vertices; ++i) {
    int li = g.lines(i, i);
    if (li > 0) {
      comb /= factorial(li) * std::pow(2.0, li);
      for (int k = 0; k < li; ++k) prop *= problem.loop_value;
    }
    for (int j = i + 1; j < g.vertices; ++j) {
      int l = g.lines(i, j);
      if (l > 0) {
        comb /= factorial(l);
        Complex d = line(i, j);
        for (int k = 0; k < l; ++k) prop *= d;
      }
    }
  }
  return comb * prop;
}

Complex graph_weight(const Multigraph& g, const CorrelationProblem& problem) {
  return graph_weight(g, problem, state_line_fn(problem));
}

namespace {

Complex correlation_sum(const CorrelationProblem& problem, const LineFn& line, bool connected_only) {
  validate(problem);
  if (problem.monomials.empty()) return {1.0, 0.0};
  std::vector<int> degrees;
  std::vector<bool> loops;
  for (const auto& m : problem.monomials) {
    degrees.push_back(m.power);
    loops.push_back(m.vacuum_ordered && !problem.state.vacuum());
  }
  std::map<std::pair<int, int>, Complex> cache;
  LineFn cached = [&](int i, int j) { return memoized(line, cache, i, j); };
  Complex acc{0.0, 0.0};
  for (const Multigraph& g : enumerate_graphs(degrees, loops)) {
    if (connected_only && !g.connected()) continue;
    acc += graph_weight(g, problem, cached);
  }
  return acc;
}

}  // namespace

Complex full_correlation(const CorrelationProblem& problem, const LineFn& line) {
  return correlation_sum(problem, line, false);
}
Complex full_correlation(const CorrelationProblem& problem) {
  return correlation_sum(problem, state_line_fn(problem), false);
}
Complex connected_correlation(const CorrelationProblem& problem, const LineFn& line) {
  return correlation_sum(problem, line, true);
}
Complex connected_correlation(const CorrelationProblem& problem) {
  return correlation_sum(problem, state_line_fn(problem), true);
}

Complex connected_oracle(const CorrelationProblem& problem, const LineFn& line) {
  validate(problem);
  int n = (int)problem.monomials.size();
  if (n > 8) throw std::domain_error("connected_oracle: more than 8 factors");
  if (n == 0) return {1.0, 0.0};
  std::map<std::pair<int, int>, Complex> cache;
  LineFn cached = [&](int i, int j) { return memoized(line, cache, i, j); };

  // full correlations of all factor subsets, line indices kept global
  std::vector<Complex> omega(1u << n), cumulant(1u << n);
  std::vector<int> members;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    members.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(i);
    CorrelationProblem sub;
    sub.state = problem.state;
    sub.loop_value = problem.loop_value;
    sub.max_power = problem.max_power;
    for (int i : members) sub.monomials.push_back(problem.monomials[i]);
    LineFn remap = [&](int i, int j) { return cached(members[i], members[j]); };
    omega[mask] = full_correlation(sub, remap);
  }
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    int first = 0;
    while (!(mask & (1u << first))) ++first;
    unsigned rest = mask & ~(1u << first);
    Complex v = omega[mask];
    // proper sub-blocks containing the first factor (sub runs over the strict
    // subsets of rest, including the empty one)
    if (rest) {
      for (unsigned sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
        unsigned block = sub | (1u << first);
        unsigned complement = mask & ~block;
        Complex rest_val = complement ? omega[complement] : Complex(1.0, 0.0);
        v -= cumulant[block] * rest_val;
        if (sub == 0) break;
      }
    }
    cumulant[mask] = v;
  }
  return cumulant[(1u << n) - 1];
}

Complex connected_oracle(const CorrelationProblem& problem) {
  return connected_oracle(problem, state_line_fn(problem));
}

Complex pairing_oracle(const CorrelationProblem& problem, const LineFn& line) {
  validate(problem);
  std::vector<int> legs;
  std::vector<bool> loops;
  for (size_t i = 0; i < problem.monomials.size(); ++i) {
    for (int k = 0; k < problem.monomials[i].power; ++k) legs.push_back((int)i);
    loops.push_back(problem.monomials[i].vacuum_ordered && !problem.state.vacuum());
  }
  if (legs.size() > 14) throw std::domain_error("pairing_oracle: more than 14 legs");
  if (legs.size() % 2 != 0) return {0.0, 0.0};
  std::map<std::pair<int, int>, Complex> cache;
  std::vector<bool> used(legs.size(), false);
  std::function<Complex()> go = [&]() -> Complex {
    size_t a = 0;
    while (a < used.size() && used[a]) ++a;
    if (a == used.size()) return {1.0, 0.0};
    used[a] = true;
    Complex acc{0.0, 0.0};
    for (size_t b = a + 1; b < used.size(); ++b) {
      if (used[b]) continue;
      int vi = legs[a], vj = legs[b];
      if (vi == vj && !loops[vi]) continue;
      used[b] = true;
      Complex pair = vi == vj ? Complex(problem.loop_value, 0.0) : memoized(line, cache, vi, vj);
      acc += pair * go();
      used[b] = false;
    }
    used[a] = false;
    return acc;
  };
  return go();
}

}  // namespace kmsqft
