#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "stablecut/core.hpp"
#include "stablecut/lp.hpp"
#include "stablecut/multiway_cut.hpp"
#include "stablecut/stability_oracle.hpp"

namespace stablecut {

// max sum w x, x_u + x_v <= 1, 0 <= x <= 1. Variable u is vertex u.
inline LpProblem build_mis_lp(const VertexWeightedGraph& g) {
  LpProblem p(Sense::maximize);
  for (int v = 0; v < g.n(); ++v) p.add_variable(Rational(0), Rational(1), g.weight(v));
  for (auto [u, v] : g.edges()) p.add_constraint({{u, Rational(1)}, {v, Rational(1)}}, Relation::le, Rational(1));
  return p;
}

struct MisLpResult {
  LpSolution lp;
  std::vector<int> v0, v_half, v1;
};

// Basic optima of this LP are half-integral.
inline MisLpResult solve_mis_lp(const VertexWeightedGraph& g) {
  MisLpResult r;
  r.lp = solve(build_mis_lp(g));
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("MIS LP did not solve");
  for (int v = 0; v < g.n(); ++v) {
    const auto& x = r.lp.values[v];
    if (x.is_zero()) r.v0.push_back(v);
    else if (x == Rational(1, 2)) r.v_half.push_back(v);
    else if (x == Rational(1)) r.v1.push_back(v);
    else throw std::logic_error("MIS LP optimum is not half-integral");
  }
  return r;
}

struct Coloring {
  std::vector<int> color;  // per vertex, in [0, c)
  int c = 0;
};

inline bool is_proper(const VertexWeightedGraph& g, const Coloring& col) {
  if (static_cast<int>(col.color.size()) != g.n()) return false;
  for (int c : col.color)
    if (c < 0 || c >= col.c) return false;
  for (auto [u, v] : g.edges())
    if (col.color[u] == col.color[v]) return false;
  return true;
}

struct WelshPowell {
  Coloring coloring;
  int bound = 0;  // max_i min(d_i + 1, i) over the degree order
};

// Greedy coloring in non-increasing degree order, ties by id.
inline WelshPowell welsh_powell_bound(const VertexWeightedGraph& g) {
  const int n = g.n();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.degree(a) > g.degree(b); });
  WelshPowell r;
  r.coloring.color.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    r.bound = std::max(r.bound, std::min(g.degree(v) + 1, i + 1));
    std::vector<char> used(n + 1, 0);
    for (int u : g.neighbors(v))
      if (r.coloring.color[u] >= 0) used[r.coloring.color[u]] = 1;
    int c = 0;
    while (used[c]) ++c;
    r.coloring.color[v] = c;
    r.coloring.c = std::max(r.coloring.c, c + 1);
  }
  return r;
}

// One outcome per color class j: V_1 plus the half vertices colored j. The
// coloring only has to be proper on G[V_1/2].
inline std::vector<RoundingOutcome<IndependentSet>> hochbaum_rounding(const VertexWeightedGraph& g,
                                                                      const std::vector<Rational>& x,
                                                                      const Coloring& col) {
  if (static_cast<int>(x.size()) != g.n() || static_cast<int>(col.color.size()) != g.n())
    throw std::invalid_argument("solution or coloring size != n");
  if (col.c < 1) throw std::invalid_argument("coloring needs at least one color");
  std::vector<int> ones, half;
  for (int v = 0; v < g.n(); ++v) {
    if (x[v] == Rational(1)) ones.push_back(v);
    else if (x[v] == Rational(1, 2)) half.push_back(v);
    else if (!x[v].is_zero()) throw std::invalid_argument("solution is not half-integral");
  }
  for (int v : half)
    if (col.color[v] < 0 || col.color[v] >= col.c) throw std::invalid_argument("color out of range");
  for (auto [u, v] : g.edges())
    if (x[u] == Rational(1, 2) && x[v] == Rational(1, 2) && col.color[u] == col.color[v])
      throw std::invalid_argument("coloring is not proper on the half vertices");
  std::vector<RoundingOutcome<IndependentSet>> out;
  for (int j = 0; j < col.c; ++j) {
    std::vector<int> s = ones;
    for (int v : half)
      if (col.color[v] == j) s.push_back(v);
    out.push_back({IndependentSet{sorted_unique(std::move(s))}, Rational(1, col.c)});
  }
  return out;
}

// Repeatedly take the heaviest remaining vertex, lowest id on ties.
inline IndependentSet greedy_mis(const VertexWeightedGraph& g) {
  std::vector<char> alive(g.n(), 1);
  std::vector<int> s;
  for (;;) {
    int best = -1;
    for (int v = 0; v < g.n(); ++v)
      if (alive[v] && (best < 0 || g.weight(best) < g.weight(v))) best = v;
    if (best < 0) break;
    s.push_back(best);
    alive[best] = 0;
    for (int u : g.neighbors(best)) alive[u] = 0;
  }
  return IndependentSet{sorted_unique(std::move(s))};
}

namespace detail {

// Max-weight independent set on a path given in order.
inline std::vector<int> mwis_sequence(const VertexWeightedGraph& g, const std::vector<int>& seq) {
  const int L = static_cast<int>(seq.size());
  std::vector<Rational> best(L + 1);
  for (int i = 1; i <= L; ++i) {
    Rational take = g.weight(seq[i - 1]) + (i >= 2 ? best[i - 2] : Rational(0));
    best[i] = std::max(best[i - 1], take);
  }
  std::vector<int> out;
  for (int i = L; i >= 1;) {
    if (best[i] == best[i - 1]) {
      --i;
    } else {
      out.push_back(seq[i - 1]);
      i -= 2;
    }
  }
  return out;
}

// Exact answer when every degree is at most 2.
inline IndependentSet mwis_paths_and_cycles(const VertexWeightedGraph& g) {
  const int n = g.n();
  std::vector<char> seen(n, 0);
  std::vector<int> s;
  auto walk = [&](int start) {
    std::vector<int> seq{start};
    seen[start] = 1;
    for (int cur = start;;) {
      int next = -1;
      for (int u : g.neighbors(cur))
        if (!seen[u]) {
          next = u;
          break;
        }
      if (next < 0) break;
      seen[next] = 1;
      seq.push_back(next);
      cur = next;
    }
    return seq;
  };
  for (int v = 0; v < n; ++v)
    if (!seen[v] && g.degree(v) <= 1) {
      auto part = mwis_sequence(g, walk(v));
      s.insert(s.end(), part.begin(), part.end());
    }
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    auto seq = walk(v);  // a cycle
    std::vector<int> without_first(seq.begin() + 1, seq.end());
    auto a = mwis_sequence(g, without_first);
    std::vector<int> middle(seq.begin() + 2, seq.end() - 1);
    auto b = mwis_sequence(g, middle);
    b.push_back(seq[0]);
    auto& pick = g.weight_of(a) < g.weight_of(b) ? b : a;
    s.insert(s.end(), pick.begin(), pick.end());
  }
  return IndependentSet{sorted_unique(std::move(s))};
}

inline std::vector<std::vector<int>> components(const VertexWeightedGraph& g) {
  std::vector<int> comp(g.n(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> c{s}, stack{s};
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors(u))
        if (comp[v] < 0) {
          comp[v] = comp[s];
          c.push_back(v);
          stack.push_back(v);
        }
    }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

// Robust for (Delta-1)-stable instances, and for (k-1)-stable instances of
// k-colorable graphs.
inline RobustResult<IndependentSet> robust_colorable(const VertexWeightedGraph& g) {
  RobustResult<IndependentSet> r;
  const int delta = g.max_degree();
  if (delta <= 2) {
    r.verdict = Verdict::optimal;
    r.solution = detail::mwis_paths_and_cycles(g);
    r.lp_value = g.weight_of(r.solution->vertices);
    return r;
  }
  std::vector<int> picked, rest;
  for (const auto& c : detail::components(g)) {
    bool clique = static_cast<int>(c.size()) == delta + 1;
    for (int v : c) clique = clique && g.degree(v) == delta;
    if (clique) {
      int best = c[0];
      for (int v : c)
        if (g.weight(best) < g.weight(v)) best = v;
      picked.push_back(best);
    } else {
      rest.insert(rest.end(), c.begin(), c.end());
    }
  }
  std::sort(rest.begin(), rest.end());
  auto sub = g.induced(rest);
  auto lp = build_mis_lp(sub);
  r.lp = solve(lp);
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("MIS LP did not solve");
  r.lp_value = r.lp.objective + g.weight_of(picked);
  auto vars = all_vars(lp);
  if (!is_integral(r.lp, vars) || !unique_on_vars(lp, r.lp, vars)) return r;
  for (int i = 0; i < sub.n(); ++i)
    if (r.lp.values[i] == Rational(1)) picked.push_back(rest[i]);
  r.verdict = Verdict::optimal;
  r.solution = IndependentSet{sorted_unique(std::move(picked))};
  return r;
}

// Recursive algorithm for (n/k)-stable instances.
inline IndependentSet unbounded_degree_alg(const VertexWeightedGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k == 1) return greedy_mis(g);
  const int n = g.n();
  if (n == 0) return {};
  const auto lp = build_mis_lp(g);
  auto sol = solve(lp);
  if (sol.status != LpStatus::optimal) throw std::logic_error("MIS LP did not solve");
  if (is_integral(sol, all_vars(lp))) {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
      if (sol.values[v] == Rational(1)) s.push_back(v);
    return IndependentSet{s};
  }
  const int threshold = (n + k - 1) / k;
  std::vector<int> high, low;
  for (int v = 0; v < n; ++v) (g.degree(v) >= threshold ? high : low).push_back(v);
  std::optional<IndependentSet> best;
  Rational best_w;
  auto consider = [&](std::vector<int> s) {
    s = sorted_unique(std::move(s));
    Rational w = g.weight_of(s);
    if (!best || best_w < w) {
      best = IndependentSet{std::move(s)};
      best_w = w;
    }
  };
  for (int u : high) {
    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
      if (v != u && !g.adjacent(u, v)) keep.push_back(v);
    auto sub = unbounded_degree_alg(g.induced(keep), k - 1);
    std::vector<int> s{u};
    for (int i : sub.vertices) s.push_back(keep[i]);
    consider(std::move(s));
  }
  auto sub = unbounded_degree_alg(g.induced(low), k - 1);
  std::vector<int> s;
  for (int i : sub.vertices) s.push_back(low[i]);
  consider(std::move(s));
  return *best;
}

struct SaRelaxation {
  int t = 0;
  int n = 0;
  std::map<std::uint32_t, int> var;  // vertex subset mask -> LP variable
  LpProblem problem{Sense::maximize};

  int y(std::uint32_t mask) const { return var.at(mask); }
};

// Sherali-Adams level t. Rows that come out identical for different (S, T)
// are added once.
inline SaRelaxation build_sa(const VertexWeightedGraph& g, int t) {
  const int n = g.n();
  if (t < 0) throw std::invalid_argument("level must be non-negative");
  if (n > 14 || t > 3) throw std::invalid_argument("Sherali-Adams size guard: need n <= 14 and t <= 3");
  SaRelaxation sa;
  sa.t = t;
  sa.n = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > t + 1) continue;
    Rational lo = mask == 0 ? Rational(1) : Rational(0);
    sa.var[mask] = sa.problem.add_variable(lo, Rational(1));
  }
  for (int u = 0; u < n; ++u) sa.problem.set_objective(sa.y(1u << u), g.weight(u));

  std::set<std::pair<std::map<int, Rational>, int>> seen;
  auto add = [&](std::map<int, Rational> row, Relation rel) {
    for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
    if (row.empty()) return;
    if (!seen.insert({row, static_cast<int>(rel)}).second) return;
    std::vector<Term> terms;
    for (auto& [j, c] : row) terms.push_back({j, c});
    sa.problem.add_constraint(std::move(terms), rel, Rational(0));
  };
  // sum over T' subset of T of (-1)^|T'| Y(S + T' + extra)
  auto signed_sum = [&](std::map<int, Rational>& row, std::uint32_t s, std::uint32_t tt, std::uint32_t extra,
                        const Rational& coef) {
    for (std::uint32_t sub = tt;; sub = (sub - 1) & tt) {
      Rational c = std::popcount(sub) % 2 ? -coef : coef;
      row[sa.y(s | sub | extra)] += c;
      if (sub == 0) break;
    }
  };
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) > t) continue;
    const std::uint32_t rest = ((1u << n) - 1) & ~s;
    for (std::uint32_t tt = rest;; tt = (tt - 1) & rest) {
      if (std::popcount(s) + std::popcount(tt) <= t) {
        for (auto [u, v] : g.edges()) {
          std::map<int, Rational> row;
          signed_sum(row, s, tt, 1u << u, Rational(1));
          signed_sum(row, s, tt, 1u << v, Rational(1));
          signed_sum(row, s, tt, 0, Rational(-1));
          add(std::move(row), Relation::le);
        }
        for (int u = 0; u < n; ++u) {
          std::map<int, Rational> lower, upper;
          signed_sum(lower, s, tt, 1u << u, Rational(1));
          add(lower, Relation::ge);
          signed_sum(upper, s, tt, 1u << u, Rational(1));
          signed_sum(upper, s, tt, 0, Rational(-1));
          add(std::move(upper), Relation::le);
        }
      }
      if (tt == 0) break;
    }
  }
  return sa;
}

struct SaResult {
  Rational value;
  std::vector<Rational> singletons;  // Y_{u}
  bool integral = false;
};

inline SaResult solve_sa(const VertexWeightedGraph& g, int t) {
  auto sa = build_sa(g, t);
  auto sol = solve_lazy(sa.problem);
  if (sol.status != LpStatus::optimal) throw std::logic_error("Sherali-Adams LP did not solve");
  SaResult r;
  r.value = sol.objective;
  r.integral = true;
  for (int u = 0; u < g.n(); ++u) {
    r.singletons.push_back(sol.values[sa.y(1u << u)]);
    r.integral = r.integral && (r.singletons.back().is_zero() || r.singletons.back() == Rational(1));
  }
  return r;
}

// Local-ratio 2-approximation for weighted vertex cover (edges in order).
inline VertexCover local_ratio_vertex_cover(const VertexWeightedGraph& g) {
  std::vector<Rational> r = g.weights();
  for (auto [u, v] : g.edges()) {
    Rational d = min(r[u], r[v]);
    r[u] -= d;
    r[v] -= d;
  }
  std::vector<int> c;
  for (int v = 0; v < g.n(); ++v)
    if (r[v].is_zero()) c.push_back(v);
  return VertexCover{c};
}

// Upper estimate of the minimum vertex cover weight, within
// min{2, 1 + 1/(beta-2)} of it on (alpha beta)-stable inputs.
inline Rational estimate_vc(const VertexWeightedGraph& g, const Rational& alpha, const Rational& beta) {
  if (!(beta > Rational(2))) throw std::invalid_argument("estimate_vc needs beta > 2");
  if (alpha < Rational(1)) throw std::invalid_argument("alpha must be at least 1");
  const Rational approx = g.weight_of(local_ratio_vertex_cover(g).vertices);
  auto lp = solve_mis_lp(g);
  const Rational a = min(alpha, beta / (beta - 1));
  auto half = g.induced(lp.v_half);
  auto frac = solve(build_mis_lp(half));
  const Rational est = (g.weight_of(lp.v0) + half.total_weight() - frac.objective) / (Rational(2) - a);
  return min(est, approx);
}

// K_k with weights (1, ..., 1, k-1-eps/2) and n-k pendants on the last clique
// vertex, each of weight eps/(4(n-k)).
inline VertexWeightedGraph gen_colorable_tight(int k, const Rational& eps, int n) {
  if (k < 2 || n < k) throw std::invalid_argument("need 2 <= k <= n");
  if (eps.sign() <= 0 || !(eps < Rational(2 * (k - 1)))) throw std::invalid_argument("eps out of range");
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) es.emplace_back(i, j);
  std::vector<Rational> w(n, Rational(1));
  w[k - 1] = Rational(k - 1) - eps / 2;
  for (int q = k; q < n; ++q) {
    es.emplace_back(k - 1, q);
    w[q] = eps / Rational(4 * (n - k));
  }
  return VertexWeightedGraph(n, std::move(es), std::move(w));
}

// Multiplies the weights of the maximum independent set by gamma. Without
// `opt` the optimum is found by enumeration and must be unique.
inline VertexWeightedGraph gen_stable_mis(const VertexWeightedGraph& g, const Rational& gamma,
                                          std::optional<IndependentSet> opt = std::nullopt) {
  if (gamma <= Rational(1)) throw std::invalid_argument("gamma must exceed 1");
  if (!opt) {
    auto best = brute_force_optimum(Instance(MisInstance{g}));
    if (!best.unique) throw std::invalid_argument("source graph has several maximum independent sets");
    opt = std::get<IndependentSet>(best.optimum);
  } else if (!is_feasible(MisInstance{g}, *opt)) {
    throw InfeasibleSolution("supplied set is not independent");
  }
  std::vector<Rational> w = g.weights();
  for (int v : opt->vertices) w[v] *= gamma;
  return VertexWeightedGraph(g.n(), g.edges(), std::move(w));
}

}  // namespace stablecut
