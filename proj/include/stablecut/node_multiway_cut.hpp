#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "stablecut/core.hpp"
#include "stablecut/lp.hpp"
#include "stablecut/multiway_cut.hpp"
#include "stablecut/stability_oracle.hpp"

namespace stablecut {

// Variable u is vertex u. Terminals are fixed at 0.
struct NodeLp {
  LpProblem problem{Sense::minimize};
  SeparationOracle oracle;
  std::vector<int> vars;  // non-terminals
};

namespace detail {

// Cheapest terminal-to-terminal path where a path costs the sum of x over its
// vertices. Vertex-weighted Dijkstra; same as splitting each vertex into an
// in/out arc of weight x_u.
inline std::optional<std::vector<int>> short_terminal_path(const NodeMultiwayCutInstance& inst,
                                                           const std::vector<Rational>& x) {
  const auto& g = inst.graph;
  const int n = g.n();
  std::optional<std::vector<int>> best;
  Rational best_len(1);
  for (int i = 0; i < inst.k(); ++i) {
    const int s = inst.terminals[i];
    std::vector<std::optional<Rational>> dist(n);
    std::vector<int> parent(n, -1);
    std::vector<char> done(n, 0);
    dist[s] = x[s];
    for (;;) {
      int u = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && dist[v] && (u < 0 || *dist[v] < *dist[u])) u = v;
      if (u < 0 || !(*dist[u] < best_len)) break;
      done[u] = 1;
      if (u != s && inst.is_terminal(u)) {
        // cheaper than anything found so far
        std::vector<int> path;
        for (int v = u; v >= 0; v = parent[v]) path.push_back(v);
        best = std::move(path);
        best_len = *dist[u];
        break;
      }
      for (int v : g.neighbors(u)) {
        if (done[v]) continue;
        Rational d = *dist[u] + x[v];
        if (!dist[v] || d < *dist[v]) {
          dist[v] = d;
          parent[v] = u;
        }
      }
    }
  }
  return best;
}

}  // namespace detail

inline NodeLp build_node_lp(const NodeMultiwayCutInstance& inst) {
  const auto& g = inst.graph;
  NodeLp lp;
  for (int v = 0; v < g.n(); ++v) {
    if (inst.is_terminal(v)) {
      lp.problem.add_variable(Rational(0), Rational(0));
    } else {
      lp.problem.add_variable(Rational(0), Rational(1), g.weight(v));
      lp.vars.push_back(v);
    }
  }
  lp.oracle = [&inst](const std::vector<Rational>& x) -> std::optional<Constraint> {
    auto path = detail::short_terminal_path(inst, x);
    if (!path) return std::nullopt;
    Constraint c;
    for (int v : *path)
      if (!inst.is_terminal(v)) c.terms.push_back({v, Rational(1)});
    c.rel = Relation::ge;
    c.rhs = Rational(1);
    return c;
  };
  return lp;
}

struct HalfIntegralNodeSolution {
  std::vector<Rational> x;
  std::vector<int> v0, v_half, v1;
};

inline HalfIntegralNodeSolution classify_half_integral(const NodeMultiwayCutInstance& inst,
                                                       const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != inst.graph.n()) throw std::invalid_argument("solution size != n");
  HalfIntegralNodeSolution h;
  h.x = x;
  for (int v = 0; v < inst.graph.n(); ++v) {
    if (x[v].is_zero()) h.v0.push_back(v);
    else if (x[v] == Rational(1, 2)) h.v_half.push_back(v);
    else if (x[v] == Rational(1)) h.v1.push_back(v);
    else throw std::invalid_argument("solution is not half-integral");
  }
  for (int t : inst.terminals)
    if (!x[t].is_zero()) throw std::invalid_argument("terminal with nonzero value");
  return h;
}

struct NodeLpResult {
  LpSolution lp;
  HalfIntegralNodeSolution half;
};

// Optimal basic solutions of the path LP are extreme points of the full
// polytope, which are half-integral; anything else is a solver bug.
inline NodeLpResult solve_node_lp(const NodeMultiwayCutInstance& inst) {
  auto lp = build_node_lp(inst);
  NodeLpResult r;
  r.lp = solve_with_separation(lp.problem, lp.oracle);
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("node LP did not solve");
  try {
    r.half = classify_half_integral(inst, r.lp.values);
  } catch (const std::invalid_argument&) {
    throw std::logic_error("node LP optimum is not half-integral");
  }
  return r;
}

// delta(B_i) for each terminal, where B_i is what s_i reaches through V_0
// inside G[V_0 + V_1/2]. An isolated terminal gets an empty boundary.
inline std::vector<std::vector<int>> half_integral_boundaries(const NodeMultiwayCutInstance& inst,
                                                              const HalfIntegralNodeSolution& h) {
  const auto& g = inst.graph;
  const int n = g.n();
  std::vector<std::vector<int>> out;
  for (int s : inst.terminals) {
    std::vector<char> in_b(n, 0), in_d(n, 0);
    std::vector<int> stack{s};
    in_b[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors(u)) {
        if (h.x[v].is_zero()) {
          if (!in_b[v]) {
            in_b[v] = 1;
            stack.push_back(v);
          }
        } else if (h.x[v] == Rational(1, 2)) {
          in_d[v] = 1;
        }
      }
    }
    std::vector<int> d;
    for (int v = 0; v < n; ++v)
      if (in_d[v]) d.push_back(v);
    out.push_back(std::move(d));
  }
  return out;
}

// k outcomes of probability 1/k each; outcome j leaves out delta(B_j).
inline std::vector<RoundingOutcome<NodeCut>> half_integral_rounding(const NodeMultiwayCutInstance& inst,
                                                                    const std::vector<Rational>& x) {
  auto h = classify_half_integral(inst, x);
  auto bd = half_integral_boundaries(inst, h);
  const int k = inst.k();
  std::vector<RoundingOutcome<NodeCut>> out;
  for (int j = 0; j < k; ++j) {
    std::vector<int> vs = h.v1;
    for (int i = 0; i < k; ++i)
      if (i != j) vs.insert(vs.end(), bd[i].begin(), bd[i].end());
    out.push_back({NodeCut{sorted_unique(std::move(vs))}, Rational(1, k)});
  }
  return out;
}

inline RobustResult<NodeCut> robust_solve_node(const NodeMultiwayCutInstance& inst) {
  auto lp = build_node_lp(inst);
  RobustResult<NodeCut> r;
  r.lp = solve_with_separation(lp.problem, lp.oracle);
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("node LP did not solve");
  r.lp_value = r.lp.objective;
  if (!is_integral(r.lp, lp.vars)) return r;
  if (!unique_on_vars(lp.problem, r.lp, lp.vars, lp.oracle)) return r;
  std::vector<int> cut;
  for (int v : lp.vars)
    if (r.lp.values[v] == Rational(1)) cut.push_back(v);
  r.verdict = Verdict::optimal;
  r.solution = NodeCut{cut};
  return r;
}

// Terminals s_1..s_k are 0..k-1, spokes u_i are k..2k-1, hub c is 2k.
inline NodeMultiwayCutInstance gen_node_star_gap(int k, const Rational& eps) {
  if (k < 3) throw std::invalid_argument("star gap needs k >= 3");
  if (eps.sign() <= 0 || !(eps < Rational(k - 1))) throw std::invalid_argument("eps must lie in (0, k-1)");
  std::vector<std::pair<int, int>> es;
  std::vector<Rational> w(2 * k + 1, Rational(1));
  for (int i = 0; i < k; ++i) {
    es.emplace_back(i, k + i);
    es.emplace_back(k + i, 2 * k);
  }
  w[2 * k - 1] = Rational(k - 1) - eps / 2;
  w[2 * k] = Rational(k * k * k);
  std::vector<int> terms(k);
  std::iota(terms.begin(), terms.end(), 0);
  return NodeMultiwayCutInstance(VertexWeightedGraph(2 * k + 1, std::move(es), std::move(w)), terms);
}

inline NodeCut node_star_optimum(int k) {
  std::vector<int> vs;
  for (int i = 0; i + 1 < k; ++i) vs.push_back(k + i);
  return NodeCut{vs};
}

// Vertex v keeps its id and weight; terminal n+v hangs off v.
inline NodeMultiwayCutInstance reduce_vc_to_node_mc(const VertexWeightedGraph& g) {
  const int n = g.n();
  std::vector<std::pair<int, int>> es = g.edges();
  std::vector<Rational> w = g.weights();
  std::vector<int> terms;
  for (int v = 0; v < n; ++v) {
    es.emplace_back(v, n + v);
    w.push_back(Rational(1));
    terms.push_back(n + v);
  }
  return NodeMultiwayCutInstance(VertexWeightedGraph(2 * n, std::move(es), std::move(w)), terms);
}

// Divides the weights of the optimal cut by gamma.
inline NodeMultiwayCutInstance gen_node_stable_from_opt(const NodeMultiwayCutInstance& inst, const Rational& gamma,
                                                        std::optional<NodeCut> opt = std::nullopt) {
  if (gamma <= Rational(1)) throw std::invalid_argument("gamma must exceed 1");
  if (!opt) {
    auto best = brute_force_optimum(Instance(inst));
    if (!best.unique) throw std::invalid_argument("source instance has several optimal cuts");
    opt = std::get<NodeCut>(best.optimum);
  } else if (!is_feasible(inst, *opt)) {
    throw InfeasibleSolution("supplied set is not a node multiway cut");
  }
  std::vector<Rational> w = inst.graph.weights();
  for (int v : opt->vertices) w[v] /= gamma;
  return NodeMultiwayCutInstance(VertexWeightedGraph(inst.graph.n(), inst.graph.edges(), std::move(w)),
                                 inst.terminals);
}

}  // namespace stablecut
