#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stablecut/core.hpp"
#include "stablecut/lp.hpp"
#include "stablecut/stability_oracle.hpp"

namespace stablecut {

enum class Verdict { optimal, not_stable };

inline const char* to_string(Verdict v) { return v == Verdict::optimal ? "Optimal" : "NotStable"; }

template <class S>
struct RobustResult {
  Verdict verdict = Verdict::not_stable;
  std::optional<S> solution;
  Rational lp_value;
  LpSolution lp;
};

template <class T>
struct RoundingOutcome {
  T outcome;
  Rational probability;
};

// Terminal index per vertex.
using Partition = std::vector<int>;

struct RoundingParams {
  int k;
  Rational p, theta, eps, alpha, beta;
  // Accepted distance from integrality; eps unless loosened. The rounding
  // stays well defined for anything below theta.
  Rational closeness;

  static RoundingParams for_k(int k) {
    if (k < 2) throw std::invalid_argument("rounding needs k >= 2");
    RoundingParams r;
    r.k = k;
    r.p = Rational(1, k);
    r.theta = Rational(6, 5 * k);
    r.eps = Rational(1, 10 * k);
    r.alpha = Rational(2 * (k - 1), k * k) / r.theta;
    r.beta = Rational(k) * r.theta;
    r.closeness = r.eps;
    return r;
  }
};

// Per-vertex point of the simplex; terminals are unit vectors.
using CkrAssignment = std::vector<std::vector<Rational>>;

struct CkrLp {
  LpProblem problem;
  int n = 0;
  int k = 0;
  std::vector<int> u_index;  // n * k

  int u(int v, int i) const { return u_index[v * k + i]; }
  std::vector<int> u_vars() const { return u_index; }
};

// CKR relaxation. d(e) = sum_i t_{e,i} with t_{e,i} >= u_i - v_i, which equals
// half the L1 distance at any optimum. `weights` overrides the edge weights.
inline CkrLp build_ckr(const MultiwayCutInstance& inst, const std::vector<Rational>* weights = nullptr) {
  const int k = inst.k();
  if (k < 2) throw std::invalid_argument("CKR needs k >= 2");
  const auto& g = inst.graph;
  CkrLp lp;
  lp.n = g.n();
  lp.k = k;
  lp.u_index.resize(g.n() * k);
  for (int v = 0; v < g.n(); ++v) {
    int t = inst.terminal_index(v);
    for (int i = 0; i < k; ++i) {
      if (t >= 0) {
        Rational val(t == i ? 1 : 0);
        lp.u_index[v * k + i] = lp.problem.add_variable(val, val);
      } else {
        lp.u_index[v * k + i] = lp.problem.add_variable(Rational(0), Rational(1));
      }
    }
    if (t < 0) {
      std::vector<Term> row;
      for (int i = 0; i < k; ++i) row.push_back({lp.u(v, i), 1});
      lp.problem.add_constraint(std::move(row), Relation::eq, 1);
    }
  }
  for (int e = 0; e < g.m(); ++e) {
    const Rational& w = weights ? weights->at(e) : g.edge(e).w;
    for (int i = 0; i < k; ++i) {
      int t = lp.problem.add_variable(Rational(0), std::nullopt, w);
      lp.problem.add_constraint({{t, 1}, {lp.u(g.edge(e).u, i), -1}, {lp.u(g.edge(e).v, i), 1}}, Relation::ge, 0);
    }
  }
  return lp;
}

inline CkrAssignment assignment_from(const CkrLp& lp, const LpSolution& sol) {
  CkrAssignment a(lp.n, std::vector<Rational>(lp.k));
  for (int v = 0; v < lp.n; ++v)
    for (int i = 0; i < lp.k; ++i) a[v][i] = sol.values[lp.u(v, i)];
  return a;
}

inline CkrAssignment assignment_from(const Partition& part, int k) {
  CkrAssignment a(part.size(), std::vector<Rational>(k));
  for (std::size_t v = 0; v < part.size(); ++v) a[v][part[v]] = 1;
  return a;
}

inline Rational ckr_distance(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += abs(a[i] - b[i]);
  return s / 2;
}

inline Rational ckr_cost(const MultiwayCutInstance& inst, const CkrAssignment& a) {
  Rational s;
  for (const auto& e : inst.graph.edges()) s += e.w * ckr_distance(a[e.u], a[e.v]);
  return s;
}

inline bool is_integral(const CkrAssignment& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!x.is_zero() && x != Rational(1)) return false;
  return true;
}

inline Partition partition_of(const CkrAssignment& a) {
  Partition p(a.size(), -1);
  for (std::size_t v = 0; v < a.size(); ++v)
    for (std::size_t i = 0; i < a[v].size(); ++i)
      if (a[v][i] == Rational(1)) p[v] = static_cast<int>(i);
  return p;
}

// Solve CKR and check. Returns Optimal only with an integral optimum; for
// k >= 3 the integral vertex must also be the unique optimum.
inline RobustResult<EdgeCut> robust_solve(const MultiwayCutInstance& inst) {
  auto lp = build_ckr(inst);
  RobustResult<EdgeCut> r;
  r.lp = solve(lp.problem);
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("CKR relaxation did not solve");
  r.lp_value = r.lp.objective;
  if (!is_integral(r.lp, lp.u_vars())) return r;
  if (inst.k() > 2 && !unique_on_vars(lp.problem, r.lp, lp.u_vars())) return r;
  r.verdict = Verdict::optimal;
  r.solution = edge_cut_from_partition(inst, partition_of(assignment_from(lp, r.lp)));
  return r;
}

namespace detail {

inline void check_assignment(const MultiwayCutInstance& inst, const CkrAssignment& a) {
  const int k = inst.k();
  if (static_cast<int>(a.size()) != inst.graph.n()) throw std::invalid_argument("assignment size != n");
  for (const auto& row : a) {
    if (static_cast<int>(row.size()) != k) throw std::invalid_argument("assignment row size != k");
    Rational s;
    for (const auto& x : row) {
      if (x.sign() < 0) throw std::invalid_argument("negative assignment coordinate");
      s += x;
    }
    if (s != Rational(1)) throw std::invalid_argument("assignment row does not sum to 1");
  }
  for (int i = 0; i < k; ++i)
    if (a[inst.terminals[i]][i] != Rational(1)) throw std::invalid_argument("terminal is not its unit vector");
}

}  // namespace detail

// Exact outcome distribution of the epsilon-local rounding. Equal partitions
// are merged, in order of first appearance.
inline std::vector<RoundingOutcome<Partition>> epsilon_local_rounding(const MultiwayCutInstance& inst,
                                                                      const CkrAssignment& a,
                                                                      const RoundingParams& params) {
  detail::check_assignment(inst, a);
  const int n = inst.graph.n(), k = inst.k();
  if (params.k != k) throw std::invalid_argument("rounding parameters are for a different k");
  const Rational& c = params.closeness;
  if (c.sign() < 0 || !(c < params.theta) || !(c < Rational(1, 2)))
    throw std::invalid_argument("closeness must be below theta and 1/2");
  std::vector<int> j(n, -1);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < k; ++i) {
      const Rational& x = a[v][i];
      if (x > c && x < Rational(1) - c) throw std::invalid_argument("assignment is not epsilon-close");
      if (x >= Rational(1) - c) j[v] = i;
    }

  std::vector<RoundingOutcome<Partition>> out;
  std::map<Partition, std::size_t> index;
  auto add = [&](Partition p, const Rational& prob) {
    auto [it, fresh] = index.emplace(p, out.size());
    if (fresh) out.push_back({std::move(p), prob});
    else out[it->second].probability += prob;
  };

  for (int rule = 0; rule < 2; ++rule) {
    const Rational rule_prob = rule == 0 ? params.p : Rational(1) - params.p;
    for (int i = 0; i < k; ++i) {
      std::vector<Rational> cuts{Rational(0), params.theta};
      for (int v = 0; v < n; ++v) {
        Rational b = rule == 0 ? Rational(1) - a[v][j[v]] : a[v][i];
        if (b.sign() > 0 && b < params.theta) cuts.push_back(b);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        Rational r = (cuts[c] + cuts[c + 1]) / 2;
        Partition p(n);
        for (int v = 0; v < n; ++v) {
          bool stay = rule == 0 ? a[v][j[v]] >= Rational(1) - r : a[v][i] < r;
          p[v] = stay ? j[v] : i;
        }
        add(std::move(p), rule_prob * Rational(1, k) * (cuts[c + 1] - cuts[c]) / params.theta);
      }
    }
  }
  return out;
}

inline Rational separation_probability(const std::vector<RoundingOutcome<Partition>>& outcomes, int u, int v) {
  Rational s;
  for (const auto& o : outcomes)
    if (o.outcome[u] != o.outcome[v]) s += o.probability;
  return s;
}

struct WeakSolveResult {
  EdgeCut cut;
  Rational cost;
  int iterations = 0;  // improvement steps run
  long budget = 0;     // T
  bool certified = false;
};

// Iterative improvement for weakly stable instances with integer weights.
inline WeakSolveResult weakly_stable_solve(const MultiwayCutInstance& inst, const Rational& delta,
                                           std::optional<Partition> initial = std::nullopt) {
  for (const auto& e : inst.graph.edges())
    if (!e.w.is_integer()) throw std::invalid_argument("weakly_stable_solve needs integer weights");
  if (delta.sign() <= 0) throw std::invalid_argument("delta must be positive");
  const int k = inst.k(), n = inst.graph.n();
  const auto params = RoundingParams::for_k(k);
  const Rational ab = params.alpha * params.beta;
  const Rational eps = params.eps;
  const Rational tau = eps * delta / (params.beta * (ab + delta));

  Partition part0;
  if (initial) {
    part0 = *initial;
  } else {
    part0.assign(n, 0);
    for (int i = 0; i < k; ++i) part0[inst.terminals[i]] = i;
  }
  std::vector<EdgeCut> iterates{edge_cut_from_partition(inst, part0)};
  std::vector<Rational> costs{cost(inst, iterates[0])};

  // T = ceil(log_{1/(1-tau)} C0) + 2
  long steps_to_one = 0;
  for (Rational x = costs[0]; x > Rational(1); x *= Rational(1) - tau) ++steps_to_one;
  const long T = steps_to_one + 2;

  WeakSolveResult res;
  res.budget = T;
  for (long it = 0; it < T; ++it) {
    const EdgeCut& cur = iterates.back();
    std::vector<char> in_cur(inst.graph.m(), 0);
    for (int e : cur.edges) in_cur[e] = 1;
    std::vector<Rational> w2;
    for (int e = 0; e < inst.graph.m(); ++e) w2.push_back(in_cur[e] ? inst.graph.edge(e).w : ab * inst.graph.edge(e).w);
    auto lp = build_ckr(inst, &w2);
    auto sol = solve(lp.problem);
    if (sol.status != LpStatus::optimal) throw std::logic_error("CKR relaxation did not solve");
    res.iterations = static_cast<int>(it) + 1;
    auto x = assignment_from(lp, sol);
    if (is_integral(x)) {
      res.cut = edge_cut_from_partition(inst, partition_of(x));
      res.cost = cost(inst, res.cut);
      res.certified = true;
      return res;
    }
    auto x0 = assignment_from(cur.part, k);
    CkrAssignment blend(n, std::vector<Rational>(k));
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < k; ++i) blend[v][i] = (Rational(1) - eps) * x0[v][i] + eps * x[v][i];
    auto outcomes = epsilon_local_rounding(inst, blend, params);
    std::optional<EdgeCut> best;
    Rational best_cost;
    for (const auto& o : outcomes) {
      auto c = edge_cut_from_partition(inst, o.outcome);
      Rational cc = cost(inst, c);
      if (!best || cc < best_cost) {
        best = c;
        best_cost = cc;
      }
    }
    if (!(best_cost < costs.back())) {
      res.cut = cur;
      res.cost = costs.back();
      res.certified = true;
      return res;
    }
    iterates.push_back(*best);
    costs.push_back(best_cost);
  }
  // No certificate within T steps: the first step that fails the geometric
  // decrease test is in the neighborhood.
  const Rational& last = costs.back();
  for (std::size_t i = 0; i + 1 < costs.size(); ++i) {
    if (costs[i + 1] - last > (Rational(1) - tau) * (costs[i] - last)) {
      res.cut = iterates[i];
      res.cost = costs[i];
      return res;
    }
  }
  res.cut = iterates.back();
  res.cost = last;
  return res;
}

// Divides the weights of the optimal cut by gamma. Without `opt` the optimum is
// found by enumeration and must be unique.
inline MultiwayCutInstance gen_stable_from_opt(const MultiwayCutInstance& inst, const Rational& gamma,
                                               std::optional<EdgeCut> opt = std::nullopt) {
  if (gamma <= Rational(1)) throw std::invalid_argument("gamma must exceed 1");
  if (!opt) {
    auto best = brute_force_optimum(Instance(inst));
    if (!best.unique) throw std::invalid_argument("source instance has several optimal cuts");
    opt = std::get<EdgeCut>(best.optimum);
  } else if (!is_feasible(inst, *opt)) {
    throw InfeasibleSolution("supplied cut is not a multiway cut");
  }
  std::vector<char> in(inst.graph.m(), 0);
  for (int e : opt->edges) in[e] = 1;
  std::vector<Edge> es = inst.graph.edges();
  for (int e = 0; e < inst.graph.m(); ++e)
    if (in[e]) es[e].w /= gamma;
  return MultiwayCutInstance(EdgeWeightedGraph(inst.graph.n(), std::move(es)), inst.terminals);
}

// Terminals 0..k-1, then one vertex per pair i<j in lexicographic order.
inline MultiwayCutInstance gen_freund_karloff(int k) {
  if (k < 3) throw std::invalid_argument("Freund-Karloff needs k >= 3");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  const int n = k + static_cast<int>(pairs.size());
  std::vector<Edge> es;
  for (int p = 0; p < static_cast<int>(pairs.size()); ++p) {
    es.push_back({pairs[p].first, k + p, Rational(1)});
    es.push_back({pairs[p].second, k + p, Rational(1)});
  }
  const Rational light(3, 2 * k);
  for (int p = 0; p < static_cast<int>(pairs.size()); ++p)
    for (int q = p + 1; q < static_cast<int>(pairs.size()); ++q) {
      std::set<int> s{pairs[p].first, pairs[p].second, pairs[q].first, pairs[q].second};
      if (s.size() == 3) es.push_back({k + p, k + q, light});
    }
  std::vector<int> terms(k);
  std::iota(terms.begin(), terms.end(), 0);
  return MultiwayCutInstance(EdgeWeightedGraph(n, std::move(es)), terms);
}

inline std::vector<std::string> freund_karloff_names(int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("s" + std::to_string(i));
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) names.push_back("p" + std::to_string(i) + "_" + std::to_string(j));
  return names;
}

// The optimal cut sending pair vertex (i,j) to terminal i.
inline EdgeCut freund_karloff_optimum(const MultiwayCutInstance& fk) {
  const int k = fk.k();
  Partition part(fk.graph.n());
  int v = 0;
  for (int i = 0; i < k; ++i) part[v++] = i;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) part[v++] = i;
  return edge_cut_from_partition(fk, part);
}

}  // namespace stablecut
