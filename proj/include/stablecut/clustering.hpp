#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablecut/core.hpp"
#include "stablecut/lp.hpp"
#include "stablecut/multiway_cut.hpp"

namespace stablecut {

// P(R): x_uv at u*n+v, y_v at n*n+v.
struct KCenterPolytope {
  Rational radius;
  int n = 0;
  LpProblem problem{Sense::minimize};
  int x(int u, int v) const { return u * n + v; }
  int y(int v) const { return n * n + v; }
  bool in_ball(const MetricInstance& m, int u, int v) const { return m.d(u, v) <= radius; }
};

inline KCenterPolytope build_kcenter_polytope(const MetricInstance& m, const Rational& r) {
  if (m.has_steiner()) throw std::invalid_argument("k-center polytope is defined on points only");
  KCenterPolytope p;
  p.radius = r;
  p.n = m.n();
  const int n = m.n();
  for (int i = 0; i < n * n + n; ++i) p.problem.add_variable(Rational(0), Rational(1));
  std::vector<Term> ys;
  for (int v = 0; v < n; ++v) ys.push_back({p.y(v), Rational(1)});
  p.problem.add_constraint(std::move(ys), Relation::le, Rational(m.k()));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      p.problem.add_constraint({{p.x(u, v), Rational(1)}, {p.y(v), Rational(-1)}}, Relation::le, Rational(0));
  for (int u = 0; u < n; ++u) {
    std::vector<Term> in, out;
    for (int v = 0; v < n; ++v) (p.in_ball(m, u, v) ? in : out).push_back({p.x(u, v), Rational(1)});
    p.problem.add_constraint(std::move(in), Relation::ge, Rational(1));
    if (!out.empty()) p.problem.add_constraint(std::move(out), Relation::eq, Rational(0));
  }
  return p;
}

struct TooManyCenters {
  int clusters = 0;
};

struct GreedyClusters {
  std::optional<Clustering> clustering;  // empty: TooManyCenters
  int clusters = 0;                       // balls carved before padding
  bool too_many() const { return !clustering; }
};

// Carve 2R-balls around the lowest remaining id. With fewer than k balls the
// lowest-id non-centers become singleton clusters, which only lowers the cost.
// R = 0 is accepted so that n = k metrics get singletons.
inline GreedyClusters kcenter_greedy(const MetricInstance& m, const Rational& r) {
  if (r.sign() < 0) throw std::invalid_argument("radius must be non-negative");
  if (m.has_steiner()) throw std::invalid_argument("k-center greedy works on points only");
  const int n = m.n();
  const Rational reach = 2 * r;
  std::vector<int> owner(n, -1), centers;
  for (int u = 0; u < n; ++u) {
    if (owner[u] >= 0) continue;
    const int id = static_cast<int>(centers.size());
    centers.push_back(u);
    for (int v = u; v < n; ++v)
      if (owner[v] < 0 && m.d(u, v) <= reach) owner[v] = id;
  }
  GreedyClusters g;
  g.clusters = static_cast<int>(centers.size());
  if (g.clusters > m.k()) return g;
  for (int v = 0; v < n && static_cast<int>(centers.size()) < m.k(); ++v) {
    if (std::find(centers.begin(), centers.end(), v) != centers.end()) continue;
    owner[v] = static_cast<int>(centers.size());
    centers.push_back(v);
  }
  // relabel so that centers are sorted, matching Clustering's convention
  std::vector<int> order(centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return centers[a] < centers[b]; });
  std::vector<int> rank(centers.size());
  Clustering c;
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = static_cast<int>(i);
    c.centers.push_back(centers[order[i]]);
  }
  for (int v = 0; v < n; ++v) c.assign.push_back(rank[owner[v]]);
  g.clustering = std::move(c);
  return g;
}

// Sorted distinct pairwise distances, 0 included.
inline std::vector<Rational> candidate_radii(const MetricInstance& m) {
  std::vector<Rational> rs{Rational(0)};
  for (int u = 0; u < m.n(); ++u)
    for (int v = u + 1; v < m.n(); ++v) rs.push_back(m.d(u, v));
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  return rs;
}

inline bool kcenter_polytope_nonempty(const MetricInstance& m, const Rational& r, LpSolution* point = nullptr) {
  auto p = build_kcenter_polytope(m, r);
  auto s = solve_lazy(p.problem);
  if (point) *point = s;
  return s.status == LpStatus::optimal;
}

struct KCenterResult {
  Verdict verdict = Verdict::not_stable;
  std::optional<Clustering> solution;
  Rational r_bar;     // smallest candidate radius with P(R) nonempty
  Rational r_greedy;  // cost of the greedy clustering at r_bar
  Clustering greedy;
  LpSolution lp;      // a point of P(r_bar)
};

// P(R) only grows with R, so a binary search over the candidates finds the
// same R-bar as a linear sweep.
inline KCenterResult kcenter_robust(const MetricInstance& m) {
  auto rs = candidate_radii(m);
  std::size_t lo = 0, hi = rs.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (kcenter_polytope_nonempty(m, rs[mid])) hi = mid;
    else lo = mid + 1;
  }
  KCenterResult r;
  r.r_bar = rs[lo];
  if (!kcenter_polytope_nonempty(m, r.r_bar, &r.lp)) throw std::logic_error("largest radius gave an empty polytope");
  auto g = kcenter_greedy(m, r.r_bar);
  if (g.too_many()) throw std::logic_error("greedy opened more than k balls on a nonempty polytope");
  r.greedy = *g.clustering;
  r.r_greedy = kcenter_cost(m, r.greedy.centers);
  if (r.r_bar == r.r_greedy) {
    r.verdict = Verdict::optimal;
    r.solution = r.greedy;
  }
  return r;
}

// supp_u = {v : x_uv > 0} must sit inside u's cluster.
inline bool support_inside_clusters(const MetricInstance& m, const Clustering& c, const std::vector<Rational>& x) {
  const int n = m.n();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (x[u * n + v].sign() > 0 && c.assign[v] != c.assign[u]) return false;
  return true;
}

// x(u,f) at u*F+f, z_f at n*F+f, F = number of facilities.
struct KMedianLp {
  LpProblem problem{Sense::minimize};
  int n = 0, f = 0;
  int x(int u, int fac) const { return u * f + fac; }
  int z(int fac) const { return n * f + fac; }
};

inline KMedianLp build_kmedian_lp(const MetricInstance& m) {
  KMedianLp lp;
  lp.n = m.n();
  lp.f = m.num_facilities();
  for (int u = 0; u < lp.n; ++u)
    for (int f = 0; f < lp.f; ++f) lp.problem.add_variable(Rational(0), std::nullopt, m.to_facility(u, f));
  for (int f = 0; f < lp.f; ++f) lp.problem.add_variable(Rational(0));
  for (int u = 0; u < lp.n; ++u) {
    std::vector<Term> t;
    for (int f = 0; f < lp.f; ++f) t.push_back({lp.x(u, f), Rational(1)});
    lp.problem.add_constraint(std::move(t), Relation::eq, Rational(1));
  }
  for (int u = 0; u < lp.n; ++u)
    for (int f = 0; f < lp.f; ++f)
      lp.problem.add_constraint({{lp.x(u, f), Rational(1)}, {lp.z(f), Rational(-1)}}, Relation::le, Rational(0));
  std::vector<Term> zs;
  for (int f = 0; f < lp.f; ++f) zs.push_back({lp.z(f), Rational(1)});
  lp.problem.add_constraint(std::move(zs), Relation::le, Rational(m.k()));
  return lp;
}

// Optimal iff the LP optimum is integral and the only optimum.
inline RobustResult<Clustering> kmedian_robust(const MetricInstance& m) {
  KMedianLp lp = build_kmedian_lp(m);
  RobustResult<Clustering> r;
  r.lp = solve_lazy(lp.problem);
  if (r.lp.status != LpStatus::optimal) throw std::logic_error("k-median LP did not solve");
  r.lp_value = r.lp.objective;
  const auto vars = all_vars(lp.problem);
  if (!is_integral(r.lp, vars) || !unique_on_vars(lp.problem, r.lp, vars)) return r;
  std::vector<int> centers;
  for (int f = 0; f < lp.f; ++f)
    if (r.lp.values[lp.z(f)] == Rational(1)) centers.push_back(f);
  for (int f = 0; f < lp.f && static_cast<int>(centers.size()) < m.k(); ++f)
    if (std::find(centers.begin(), centers.end(), f) == centers.end()) centers.push_back(f);
  r.verdict = Verdict::optimal;
  r.solution = clustering_from_centers(m, centers);
  return r;
}

enum class GapVariant { steiner, no_steiner };

inline const char* to_string(GapVariant v) { return v == GapVariant::steiner ? "steiner" : "no_steiner"; }

struct GapCheck {
  std::string name;
  bool holds = false;
};

struct KMedianGap {
  GapVariant variant = GapVariant::steiner;
  int n = 0;
  MetricInstance metric;
  Rational delta, alpha, eps_prime, gamma;
  std::vector<int> opt_centers;
  std::vector<Rational> lp_point;  // the fractional point from the construction, KMedianLp layout
};

namespace detail {

inline void metric_closure(std::vector<std::vector<std::optional<Rational>>>& d) {
  const int n = static_cast<int>(d.size());
  for (int m = 0; m < n; ++m)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (d[u][m] && d[m][v] && (!d[u][v] || *d[u][m] + *d[m][v] < *d[u][v])) d[u][v] = *d[u][m] + *d[m][v];
}

// Convergent F(j+1)/F(j) below phi and within 1e-9 of it.
inline Rational golden_ratio_below() {
  const Rational tol(1, 1000000000);
  mpz_class a = 1, b = 1;
  for (;;) {
    mpz_class c = a + b;
    a = b;
    b = c;
    Rational r{mpq_class(b, a)};
    auto above = [](const Rational& x) { return x * x - x - 1 > Rational(0); };
    if (!above(r) && above(r + tol)) return r;
  }
}

inline void for_each_subset(int f, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    fn(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == f - k + i) --i;
    if (i < 0) return;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

// Every set partition of n items into at most k blocks, as block labels.
inline void for_each_partition(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> lab(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      fn(lab);
      return;
    }
    for (int b = 0; b <= used && b < k; ++b) {
      lab[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

inline Rational partition_median_cost(const MetricInstance& m, const std::vector<int>& lab) {
  const int blocks = *std::max_element(lab.begin(), lab.end()) + 1;
  Rational total;
  for (int b = 0; b < blocks; ++b) {
    std::optional<Rational> best;
    for (int f = 0; f < m.num_facilities(); ++f) {
      Rational s;
      for (int u = 0; u < m.n(); ++u)
        if (lab[u] == b) s += m.to_facility(u, f);
      if (!best || s < *best) best = s;
    }
    total += *best;
  }
  return total;
}

inline Rational lp_point_cost(const MetricInstance& m, const KMedianLp& lp, const std::vector<Rational>& x) {
  Rational s;
  for (int u = 0; u < m.n(); ++u)
    for (int f = 0; f < m.num_facilities(); ++f) s += m.to_facility(u, f) * x[lp.x(u, f)];
  return s;
}

inline KMedianGap steiner_gap(int n) {
  KMedianGap g;
  g.variant = GapVariant::steiner;
  g.n = n;
  g.delta = Rational(n) / Rational((n - 1) * (n - 1));
  g.gamma = (2 - g.delta) / (1 + g.delta);
  // graph on clients 0..n-1 and hub n; facility f_i sits on client i
  std::vector<std::vector<std::optional<Rational>>> d(n + 1, std::vector<std::optional<Rational>>(n + 1));
  for (int i = 0; i <= n; ++i) d[i][i] = Rational(0);
  for (int i = 0; i < n; ++i) d[i][n] = d[n][i] = Rational(1);
  d[n - 2][n - 1] = d[n - 1][n - 2] = 1 + g.delta;
  metric_closure(d);
  std::vector<std::vector<Rational>> dc(n, std::vector<Rational>(n));
  SteinerFacilities sf;
  sf.m = n + 1;
  sf.cross.assign(n, std::vector<Rational>(n + 1));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) dc[u][v] = *d[u][v];
    for (int f = 0; f <= n; ++f) sf.cross[u][f] = *d[u][f];
  }
  g.metric = MetricInstance(std::move(dc), n - 1, std::move(sf));
  for (int i = 0; i + 1 < n; ++i) g.opt_centers.push_back(i);
  KMedianLp lp = build_kmedian_lp(g.metric);
  g.lp_point.assign(lp.problem.num_vars(), Rational(0));
  const Rational big(n - 2, n - 1), small(1, n - 1);
  for (int i = 0; i < n; ++i) {
    g.lp_point[lp.z(i)] = big;
    g.lp_point[lp.x(i, i)] = big;
    g.lp_point[lp.x(i, n)] = small;
  }
  g.lp_point[lp.z(n)] = small;
  return g;
}

inline KMedianGap no_steiner_gap(int n) {
  KMedianGap g;
  g.variant = GapVariant::no_steiner;
  g.n = n;
  g.alpha = golden_ratio_below();
  g.delta = Rational(2) / (g.alpha * n);
  g.eps_prime = Rational(1, 1000000);
  g.gamma = g.alpha * n / (g.alpha * n + 4) * g.alpha;
  // U_i (i = 1..n) is points (i-1)*n .. i*n-1; v is n*n
  const int pts = n * n + 1, v = n * n;
  auto sv = [n](int p) { return p / n + 1; };
  std::vector<std::vector<std::optional<Rational>>> d(pts, std::vector<std::optional<Rational>>(pts));
  for (int p = 0; p < pts; ++p) d[p][p] = Rational(0);
  for (int p = 0; p < v; ++p) {
    d[p][v] = d[v][p] = sv(p) == 1 ? 1 / g.alpha : Rational(1);
    for (int q = 0; q < v; ++q) {
      if (p == q) continue;
      if (sv(p) == sv(q)) d[p][q] = g.eps_prime;
      else if (std::min(sv(p), sv(q)) == n - 1 && std::max(sv(p), sv(q)) == n) d[p][q] = 1 + g.delta;
    }
  }
  metric_closure(d);
  std::vector<std::vector<Rational>> dm(pts, std::vector<Rational>(pts));
  for (int p = 0; p < pts; ++p)
    for (int q = 0; q < pts; ++q) dm[p][q] = *d[p][q];
  g.metric = MetricInstance(std::move(dm), n - 1);
  for (int i = 1; i <= n - 1; ++i) g.opt_centers.push_back((i - 1) * n);
  KMedianLp lp = build_kmedian_lp(g.metric);
  g.lp_point.assign(lp.problem.num_vars(), Rational(0));
  const Rational big(n - 2, n - 1), small(1, n - 1);
  g.lp_point[lp.z(v)] = small;
  for (int i = 1; i <= n; ++i) g.lp_point[lp.z((i - 1) * n)] = big;
  for (int p = 0; p < v; ++p) {
    g.lp_point[lp.x(p, (sv(p) - 1) * n)] = big;
    g.lp_point[lp.x(p, v)] = small;
  }
  g.lp_point[lp.x(v, 0)] = big;
  g.lp_point[lp.x(v, v)] = small;
  return g;
}

}  // namespace detail

inline KMedianGap kmedian_gap(GapVariant variant, int n) {
  if (n < 4) throw std::invalid_argument("gap construction needs n >= 4");
  return variant == GapVariant::steiner ? detail::steiner_gap(n) : detail::no_steiner_gap(n);
}

inline MetricInstance gen_kmedian_gap(GapVariant variant, int n) { return kmedian_gap(variant, n).metric; }

// Re-evaluates the competing-clustering case list of the construction with
// exact arithmetic. Steiner: all set partitions of the clients. No Steiner:
// all center sets, clustered by nearest center.
inline std::vector<GapCheck> kmedian_gap_checks(const KMedianGap& g) {
  std::vector<GapCheck> out;
  auto add = [&](std::string name, bool ok) { out.push_back({std::move(name), ok}); };
  const auto& m = g.metric;
  const int n = g.n;
  const Rational opt = kmedian_cost(m, g.opt_centers);
  const Rational gopt = g.gamma * opt;
  KMedianLp lp = build_kmedian_lp(m);
  const Rational lp_cost = detail::lp_point_cost(m, lp, g.lp_point);
  add("lp point is feasible", lp.problem.feasible(g.lp_point));

  if (g.variant == GapVariant::steiner) {
    add("opt equals 1 + delta", opt == 1 + g.delta);
    // optimal partition: singletons, then {n-2, n-1} together
    std::vector<int> opt_lab(n);
    for (int i = 0; i < n; ++i) opt_lab[i] = std::min(i, n - 2);
    std::optional<Rational> best_other, pair_joins, singles_merge;
    Rational best_any = opt;
    detail::for_each_partition(n, m.k(), [&](const std::vector<int>& lab) {
      Rational c = detail::partition_median_cost(m, lab);
      best_any = std::min(best_any, c);
      if (lab == opt_lab) return;
      auto upd = [&](std::optional<Rational>& slot) {
        if (!slot || c < *slot) slot = c;
      };
      upd(best_other);
      bool joins = false;
      for (int i = 0; i + 2 < n; ++i) joins = joins || lab[i] == lab[n - 2] || lab[i] == lab[n - 1];
      if (joins) upd(pair_joins);
      const bool split = lab[n - 2] != lab[n - 1];
      bool alone = split;
      for (int i = 0; i + 2 < n; ++i) alone = alone && lab[i] != lab[n - 2] && lab[i] != lab[n - 1];
      if (alone) upd(singles_merge);
    });
    add("no clustering is cheaper than the optimum", best_any == opt);
    add("optimal clustering is unique", best_other && opt < *best_other);
    Rational hub = opt * 10, both;
    bool hub_seen = false, both_seen = false;
    detail::for_each_subset(m.num_facilities(), m.k(), [&](const std::vector<int>& c) {
      Rational cc = kmedian_cost(m, c);
      if (std::find(c.begin(), c.end(), n) != c.end()) {
        hub = hub_seen ? std::min(hub, cc) : cc;
        hub_seen = true;
      }
      if (std::find(c.begin(), c.end(), n - 2) != c.end() && std::find(c.begin(), c.end(), n - 1) != c.end()) {
        both = both_seen ? std::min(both, cc) : cc;
        both_seen = true;
      }
    });
    add("opening the hub costs at least 2 > 1 + delta", hub_seen && hub >= Rational(2) && Rational(2) > opt);
    add("opening both pair facilities costs at least 2", both_seen && both >= Rational(2));
    add("gamma(1 + delta) = 2 - delta < 2", gopt == 2 - g.delta && gopt < Rational(2));
    add("pair point joining a singleton costs at least 2", pair_joins && *pair_joins >= Rational(2) && gopt < *pair_joins);
    add("split pair with merged singletons costs 2", singles_merge && *singles_merge == Rational(2) && gopt < *singles_merge);
    add("lp point costs n/(n-1)", lp_cost == Rational(n, n - 1));
    add("n/(n-1) < 1 + delta", Rational(n, n - 1) < opt);
    return out;
  }

  const Rational& a = g.alpha;
  const int v = n * n;
  auto sv = [n](int p) { return p / n + 1; };
  add("alpha in (3/2, 2)", Rational(3, 2) < a && a < Rational(2));
  add("alpha <= 1 + 1/alpha", a <= 1 + 1 / a);
  add("alpha within 1e-9 of the golden ratio", [&] {
    Rational t = a + Rational(1, 1000000000);
    return a * a - a - 1 <= Rational(0) && t * t - t - 1 > Rational(0);
  }());
  add("opt equals n + 3/alpha up to the eps' terms", opt == n + 3 / a + (n - 1) * (n - 1) * g.eps_prime);
  std::vector<int> opt_lab(v + 1);
  for (int p = 0; p < v; ++p) opt_lab[p] = std::min(sv(p), n - 1) - 1;
  opt_lab[v] = 0;
  std::optional<Rational> best_any, other, at_v, at_v_u1, both_pair, un_elsewhere;
  auto upd = [](std::optional<Rational>& slot, const Rational& c) {
    if (!slot || c < *slot) slot = c;
  };
  detail::for_each_subset(m.num_facilities(), m.k(), [&](const std::vector<int>& cs) {
    Rational c = kmedian_cost(m, cs);
    upd(best_any, c);
    auto cl = clustering_from_centers(m, cs);
    // canonical labels so partitions compare
    std::vector<int> lab(v + 1, -1), map(cs.size(), -1);
    int next = 0;
    for (int p = 0; p <= v; ++p) {
      int& t = map[cl.assign[p]];
      if (t < 0) t = next++;
      lab[p] = t;
    }
    if (lab != opt_lab) upd(other, c);
    bool has_v = false, has_u1 = false, has_a = false, has_b = false;
    for (int f : cs) {
      if (f == v) has_v = true;
      else if (sv(f) == 1) has_u1 = true;
      else if (sv(f) == n - 1) has_a = true;
      else if (sv(f) == n) has_b = true;
    }
    if (has_v) upd(at_v, c);
    if (has_v && has_u1) upd(at_v_u1, c);
    if (!has_v && has_a && has_b) upd(both_pair, c);
    const int un_center = cs[cl.assign[(n - 1) * n]];
    if (!has_v && un_center != v && sv(un_center) <= n - 2) upd(un_elsewhere, c);
  });
  const Rational case_vc = n * (1 + 1 / a);
  add("no center set beats the optimum", best_any && *best_any == opt);
  add("optimal clustering is unique", other && opt < *other);
  add("center at v costs at least n + n/alpha > opt", at_v && *at_v >= n + n / a && n + n / a > n + 3 / a);
  add("centers in both U_{n-1} and U_n cost at least n(1 + 1/alpha) + 1/alpha > opt",
      both_pair && *both_pair >= case_vc + 1 / a && case_vc + 1 / a > n + 3 / a);
  add("gamma < alpha", g.gamma < a);
  add("gamma * opt < alpha n < 2n", gopt < a * n && a * n < Rational(2 * n));
  add("centers at v and in U_1 cost at least 2n", at_v_u1 && *at_v_u1 >= Rational(2 * n) && gopt < *at_v_u1);
  add("gamma * opt < n(1 + 1/alpha)", gopt < case_vc && at_v && gopt < *at_v);
  add("U_n clustered away from U_{n-1} costs at least n(1 + 1/alpha) + 1/alpha",
      un_elsewhere && *un_elsewhere >= case_vc + 1 / a && gopt < *un_elsewhere);
  add("every other clustering costs more than gamma * opt", other && gopt < *other);
  add("lp point costs n + 2/alpha up to the eps' terms", lp_cost == n + 2 / a + n * (n - 1) * g.eps_prime * Rational(n - 2, n - 1));
  add("lp point is cheaper than opt", lp_cost < opt);
  return out;
}

// Two pairs {0,1} and {2,3} at distance 1, everything else 100, k = 2.
inline MetricInstance gen_two_pairs() {
  std::vector<std::vector<Rational>> d(4, std::vector<Rational>(4, Rational(100)));
  for (int i = 0; i < 4; ++i) d[i][i] = Rational(0);
  d[0][1] = d[1][0] = d[2][3] = d[3][2] = Rational(1);
  return MetricInstance(std::move(d), 2);
}

}  // namespace stablecut
