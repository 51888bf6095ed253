#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stablecut/core.hpp"
#include "stablecut/lp.hpp"
#include "stablecut/multiway_cut.hpp"

namespace stablecut {

// One variable per pair u < v, in lexicographic order.
struct TourLp {
  LpProblem problem{Sense::minimize};
  int n = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<int>> index;  // index[u][v] = variable of {u, v}
  int var(int u, int v) const { return index[u][v]; }
};

inline TourLp build_tour_lp(const MetricInstance& m) {
  if (m.n() < 3) throw std::invalid_argument("tour LP needs n >= 3");
  TourLp lp;
  lp.n = m.n();
  lp.index.assign(lp.n, std::vector<int>(lp.n, -1));
  for (int u = 0; u < lp.n; ++u)
    for (int v = u + 1; v < lp.n; ++v) {
      lp.index[u][v] = lp.index[v][u] = lp.problem.add_variable(Rational(0), Rational(1), m.d(u, v));
      lp.pairs.emplace_back(u, v);
    }
  for (int u = 0; u < lp.n; ++u) {
    std::vector<Term> t;
    for (int v = 0; v < lp.n; ++v)
      if (v != u) t.push_back({lp.var(u, v), Rational(1)});
    lp.problem.add_constraint(std::move(t), Relation::eq, Rational(2));
  }
  return lp;
}

namespace detail {

using Pairs = std::vector<std::pair<int, int>>;

inline Rational cut_value(const Pairs& pairs, const std::vector<Rational>& x, const std::vector<char>& in_s) {
  Rational s;
  for (std::size_t e = 0; e < pairs.size(); ++e)
    if (in_s[pairs[e].first] != in_s[pairs[e].second]) s += x[e];
  return s;
}

// Exact minimum cut over all proper subsets containing vertex 0.
inline std::pair<Rational, std::vector<char>> min_cut_by_subsets(int n, const Pairs& pairs,
                                                                const std::vector<Rational>& x) {
  std::optional<Rational> best;
  std::vector<char> best_s;
  for (unsigned long mask = 0; mask + 1 < (1ul << (n - 1)); ++mask) {
    std::vector<char> in_s(n, 0);
    in_s[0] = 1;
    for (int v = 1; v < n; ++v) in_s[v] = (mask >> (v - 1)) & 1ul;
    Rational c = cut_value(pairs, x, in_s);
    if (!best || c < *best) {
      best = c;
      best_s = in_s;
    }
  }
  return {*best, best_s};
}

// Stoer-Wagner on the support graph of x.
inline std::pair<Rational, std::vector<char>> min_cut_stoer_wagner(int n, const Pairs& pairs,
                                                                  const std::vector<Rational>& x) {
  std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n));
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    auto [u, v] = pairs[e];
    w[u][v] = w[v][u] = x[e];
  }
  std::vector<std::vector<int>> members(n);
  for (int v = 0; v < n; ++v) members[v] = {v};
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  std::optional<Rational> best;
  std::vector<int> best_side;
  while (alive.size() > 1) {
    std::vector<char> added(n, 0);
    std::vector<Rational> key(n);
    int prev = -1, last = -1;
    for (std::size_t step = 0; step < alive.size(); ++step) {
      int pick = -1;
      for (int v : alive)
        if (!added[v] && (pick < 0 || key[v] > key[pick])) pick = v;
      if (pick < 0) break;
      added[pick] = 1;
      prev = last;
      last = pick;
      for (int v : alive)
        if (!added[v]) key[v] += w[pick][v];
    }
    if (!best || key[last] < *best) {
      best = key[last];
      best_side = members[last];
    }
    // merge last into prev
    for (int v : alive) {
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
    w[prev][prev] = Rational(0);
    members[prev].insert(members[prev].end(), members[last].begin(), members[last].end());
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  std::vector<char> in_s(n, 0);
  for (int v : best_side) in_s[v] = 1;
  return {*best, in_s};
}

}  // namespace detail

inline constexpr int kSubsetSeparationLimit = 12;

// Minimum x(delta(S)) over proper nonempty S, with a minimizing S.
inline std::pair<Rational, std::vector<char>> tour_min_cut(const TourLp& lp, const std::vector<Rational>& x) {
  return lp.n <= kSubsetSeparationLimit ? detail::min_cut_by_subsets(lp.n, lp.pairs, x)
                                        : detail::min_cut_stoer_wagner(lp.n, lp.pairs, x);
}

inline SeparationOracle subtour_oracle(const TourLp& lp) {
  return [pairs = lp.pairs, n = lp.n](const std::vector<Rational>& x) -> std::optional<Constraint> {
    auto [value, in_s] = n <= kSubsetSeparationLimit ? detail::min_cut_by_subsets(n, pairs, x)
                                                     : detail::min_cut_stoer_wagner(n, pairs, x);
    if (!(value < Rational(2))) return std::nullopt;
    Constraint c;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (in_s[pairs[e].first] != in_s[pairs[e].second]) c.terms.push_back({static_cast<int>(e), Rational(1)});
    c.rel = Relation::ge;
    c.rhs = Rational(2);
    return c;
  };
}

struct TourLpResult {
  LpSolution lp;
  int cuts = 0;
};

inline TourLpResult solve_tour_lp(TourLp& lp, bool cycle_cover_only = false) {
  TourLpResult r;
  const auto rows = lp.problem.constraints().size();
  r.lp = cycle_cover_only ? solve(lp.problem) : solve_with_separation(lp.problem, subtour_oracle(lp));
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("tour LP did not solve");
  r.cuts = static_cast<int>(lp.problem.constraints().size() - rows);
  return r;
}

// Greedy edge insertion: cheapest pairs first (ties by endpoints), keeping
// degrees <= 2 and closing a cycle only with the last edge.
inline Tour greedy_tour(const MetricInstance& m) {
  const int n = m.n();
  if (n < 3) throw std::invalid_argument("tour needs n >= 3");
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) es.emplace_back(u, v);
  std::stable_sort(es.begin(), es.end(), [&](const auto& a, const auto& b) {
    return m.d(a.first, a.second) < m.d(b.first, b.second);
  });
  std::vector<int> deg(n, 0), comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  std::vector<std::vector<int>> adj(n);
  int taken = 0;
  for (auto [u, v] : es) {
    if (taken == n) break;
    if (deg[u] == 2 || deg[v] == 2) continue;
    const int a = find(u), b = find(v);
    if (a == b && taken != n - 1) continue;
    comp[a] = b;
    ++deg[u];
    ++deg[v];
    adj[u].push_back(v);
    adj[v].push_back(u);
    ++taken;
  }
  if (taken != n) throw std::logic_error("greedy did not close a tour");
  Tour t;
  int prev = -1, cur = 0;
  for (int i = 0; i < n; ++i) {
    t.order.push_back(cur);
    int nxt = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
    if (prev < 0) nxt = std::min(adj[cur][0], adj[cur][1]);
    prev = cur;
    cur = nxt;
  }
  return t;
}

struct TspRobustResult {
  Verdict verdict = Verdict::not_stable;
  std::optional<Tour> solution;
  Tour greedy;
  Rational greedy_cost;
  Rational lp_value;
  LpSolution lp;
  int cuts = 0;
};

// Optimal iff the LP value equals the greedy cost and the LP optimum is unique
// (so the certified tour is the only optimal one).
inline TspRobustResult tsp_robust(const MetricInstance& m, bool cycle_cover_only = false) {
  TspRobustResult r;
  r.greedy = greedy_tour(m);
  r.greedy_cost = tour_cost(m, r.greedy);
  TourLp lp = build_tour_lp(m);
  auto s = solve_tour_lp(lp, cycle_cover_only);
  r.lp = s.lp;
  r.cuts = s.cuts;
  r.lp_value = s.lp.objective;
  if (r.lp_value != r.greedy_cost) return r;
  // the greedy tour is optimal; check that nothing else on the LP face is
  LpSolution at_tour = s.lp;
  at_tour.values.assign(lp.problem.num_vars(), Rational(0));
  for (int i = 0; i < m.n(); ++i) at_tour.values[lp.var(r.greedy.order[i], r.greedy.order[(i + 1) % m.n()])] = 1;
  const SeparationOracle oracle = cycle_cover_only ? SeparationOracle{} : subtour_oracle(lp);
  if (!unique_on_vars(lp.problem, at_tour, all_vars(lp.problem), oracle)) return r;
  r.verdict = Verdict::optimal;
  r.solution = r.greedy;
  return r;
}

struct NonEdgeCheck {
  int u = 0, v = 0;
  bool holds = false;
};

struct TourPropertyReport {
  Rational max_ratio;
  Rational ceiling;  // (q+1)^2 / (q^2+1) at q = max_ratio
  std::vector<NonEdgeCheck> non_edges;
  bool all_non_edges_hold = true;
};

inline Rational ratio_ceiling(const Rational& q) { return (q + 1) * (q + 1) / (q * q + 1); }

// Consecutive-edge ratios are taken in both directions around the tour.
inline TourPropertyReport check_stable_tour_properties(const MetricInstance& m, const Tour& t) {
  if (!is_feasible(m, t)) throw InfeasibleSolution("not a tour of this metric");
  const int n = m.n();
  auto edge = [&](int i) { return m.d(t.order[((i % n) + n) % n], t.order[((i + 1) % n + n) % n]); };
  TourPropertyReport r;
  r.max_ratio = Rational(1);
  for (int i = 0; i < n; ++i) {
    const Rational a = edge(i), b = edge(i + 1);
    r.max_ratio = std::max({r.max_ratio, a / b, b / a});
  }
  r.ceiling = ratio_ceiling(r.max_ratio);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[t.order[i]] = i;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const int gap = (pos[v] - pos[u] + n) % n;
      if (gap == 1 || gap == n - 1) continue;
      const Rational eu[2] = {edge(pos[u] - 1), edge(pos[u])};
      const Rational ev[2] = {edge(pos[v] - 1), edge(pos[v])};
      bool ok = true;
      for (const auto& a : eu)
        for (const auto& b : ev) ok = ok && m.d(u, v) > (a + b) / 2;
      r.non_edges.push_back({u, v, ok});
      r.all_non_edges_hold = r.all_non_edges_hold && ok;
    }
  return r;
}

// Side-1 square with diagonals `diag`: points 0..3 in cyclic order.
inline MetricInstance gen_square(const Rational& diag) {
  std::vector<std::vector<Rational>> d(4, std::vector<Rational>(4, Rational(1)));
  for (int i = 0; i < 4; ++i) d[i][i] = Rational(0);
  d[0][2] = d[2][0] = d[1][3] = d[3][1] = diag;
  return MetricInstance(std::move(d), 1);
}

}  // namespace stablecut
