#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "stablecut/core.hpp"

namespace stablecut {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Unsupported : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EnumerationBudget {
  long max_solutions = 20'000'000;  // candidates visited
  int max_mc_nonterminals = 10;
  int max_graph_n = 10;
  int max_tsp_n = 9;
  long max_center_sets = 100'000;

  // A budget of n visited candidates with the per-problem size caps lifted.
  static EnumerationBudget unlimited_caps(long n) {
    EnumerationBudget b;
    b.max_solutions = n;
    b.max_mc_nonterminals = b.max_graph_n = b.max_tsp_n = 1 << 20;
    b.max_center_sets = n;
    return b;
  }
  // STABLECUT_BUDGET, when set, replaces the defaults.
  static EnumerationBudget from_env() {
    if (const char* s = std::getenv("STABLECUT_BUDGET")) {
      char* end = nullptr;
      long n = std::strtol(s, &end, 10);
      if (end != s && *end == '\0' && n > 0) return unlimited_caps(n);
    }
    return EnumerationBudget{};
  }
};

struct StabilityReport {
  ExtRational gamma_star;
  std::optional<Solution> witness;
  Solution optimum;
  Rational optimum_cost;
  bool is_unique_optimum = true;
};

struct OptimumSummary {
  Solution optimum;
  Rational cost;
  bool unique = true;
  std::optional<Solution> other_optimum;
};

namespace detail {

// Fixed-capacity bit set over solution elements (edges, vertices or pairs).
struct ElementSet {
  static constexpr int kWords = 4;
  static constexpr int kCapacity = 64 * kWords;
  std::array<std::uint64_t, kWords> w{};

  void set(int i) { w[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void reset(int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
  friend bool operator==(const ElementSet&, const ElementSet&) = default;

  template <class F>
  void for_each_minus(const ElementSet& other, F&& f) const {
    for (int k = 0; k < kWords; ++k) {
      std::uint64_t x = w[k] & ~other.w[k];
      while (x) {
        f(64 * k + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const {
    std::size_t h = 0;
    for (auto x : s.w) h = h * 1000003u ^ std::hash<std::uint64_t>()(x);
    return h;
  }
};

// Exact numbers used while enumerating: scaled int64 when the totals fit,
// Rational otherwise.
inline bool less_ratio(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return static_cast<__int128>(a) * d < static_cast<__int128>(c) * b;
}
inline bool less_ratio(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  return a * d < c * b;
}
inline Rational to_rational(std::int64_t x, const Rational& scale) { return Rational(static_cast<long>(x)) / scale; }
inline Rational to_rational(const Rational& x, const Rational& scale) { return x / scale; }

class Counter {
 public:
  explicit Counter(long limit) : limit_(limit) {}
  void tick() {
    if (++count_ > limit_) throw BudgetExceeded("enumeration budget exceeded");
  }

 private:
  long limit_;
  long count_ = 0;
};

inline void check_capacity(int elements) {
  if (elements > ElementSet::kCapacity) throw BudgetExceeded("too many solution elements for enumeration");
}

// Each enumerator calls visit(set, cost, make) once per canonical feasible
// solution, where make() builds the Solution. For minimization, prune(partial)
// may skip every completion of a prefix whose partial cost is already too high.

// Edge cuts as boundaries of terminal partitions; partitions with equal
// boundaries are visited repeatedly, callers dedupe where it matters.
struct McEnum {
  const MultiwayCutInstance* inst;
  std::vector<int> free_vertices;
  long limit;

  template <class Num, class Visit, class Prune>
  void run(const std::vector<Num>& w, Visit&& visit, Prune&& prune) const {
    const auto& g = inst->graph;
    const int k = inst->k();
    const int f = static_cast<int>(free_vertices.size());
    std::vector<int> part(g.n(), -1);
    for (int i = 0; i < k; ++i) part[inst->terminals[i]] = i;
    std::vector<int> rank(g.n(), -1);
    for (int i = 0; i < f; ++i) rank[free_vertices[i]] = i;
    // Edges are decided when their later endpoint is placed.
    std::vector<std::vector<int>> decide(f);
    ElementSet cut;
    Num base{0};
    for (int e = 0; e < g.m(); ++e) {
      int ru = rank[g.edge(e).u], rv = rank[g.edge(e).v];
      if (ru < 0 && rv < 0) {
        cut.set(e);
        base += w[e];
      } else {
        decide[std::max(ru, rv)].push_back(e);
      }
    }
    Counter counter(limit);
    auto make = [&]() -> Solution { return edge_cut_from_partition(*inst, part); };
    auto rec = [&](auto& self, int pos, const Num& c) -> void {
      if (prune(c)) return;
      if (pos == f) {
        counter.tick();
        visit(static_cast<const ElementSet&>(cut), c, make);
        return;
      }
      int v = free_vertices[pos];
      for (int p = 0; p < k; ++p) {
        part[v] = p;
        Num add{0};
        for (int e : decide[pos])
          if (part[g.edge(e).u] != part[g.edge(e).v]) {
            cut.set(e);
            add += w[e];
          }
        self(self, pos + 1, c + add);
        for (int e : decide[pos]) cut.reset(e);
      }
      part[v] = -1;
    };
    rec(rec, 0, base);
  }
};

struct NodeEnum {
  const NodeMultiwayCutInstance* inst;
  std::vector<int> free_vertices;
  long limit;

  template <class Num, class Visit, class Prune>
  void run(const std::vector<Num>& w, Visit&& visit, Prune&&) const {
    Counter counter(limit);
    const int f = static_cast<int>(free_vertices.size());
    NodeCut cur;
    auto make = [&]() -> Solution { return cur; };
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f); ++mask) {
      counter.tick();
      cur.vertices.clear();
      ElementSet s;
      Num c{0};
      for (int i = 0; i < f; ++i)
        if ((mask >> i) & 1u) {
          cur.vertices.push_back(free_vertices[i]);
          s.set(free_vertices[i]);
          c += w[free_vertices[i]];
        }
      if (is_feasible(*inst, cur)) visit(static_cast<const ElementSet&>(s), c, make);
    }
  }
};

// Independent sets by include/exclude search; `complement` yields vertex covers.
struct GraphEnum {
  const VertexWeightedGraph* g;
  bool complement;
  long limit;

  template <class Num, class Visit, class Prune>
  void run(const std::vector<Num>& w, Visit&& visit, Prune&&) const {
    Counter counter(limit);
    const int n = g->n();
    std::vector<char> in(n, 0);
    ElementSet s;
    auto make = [&]() -> Solution {
      std::vector<int> vs;
      for (int v = 0; v < n; ++v)
        if (static_cast<bool>(in[v]) != complement) vs.push_back(v);
      if (complement) return VertexCover{vs};
      return IndependentSet{vs};
    };
    Num all{0};
    for (int v = 0; v < n; ++v) all += w[v];
    auto rec = [&](auto& self, int v, const Num& c) -> void {
      if (v == n) {
        counter.tick();
        if (!complement) {
          visit(static_cast<const ElementSet&>(s), c, make);
        } else {
          ElementSet out;
          for (int u = 0; u < n; ++u)
            if (!in[u]) out.set(u);
          visit(static_cast<const ElementSet&>(out), all - c, make);
        }
        return;
      }
      self(self, v + 1, c);
      for (int u : g->neighbors(v))
        if (u < v && in[u]) return;
      in[v] = 1;
      s.set(v);
      self(self, v + 1, c + w[v]);
      in[v] = 0;
      s.reset(v);
    };
    rec(rec, 0, Num{0});
  }
};

inline int pair_id(int n, int u, int v) { return u < v ? u * n + v : v * n + u; }

// Tours fixed at vertex 0, one direction each.
struct TspEnum {
  const MetricInstance* m;
  long limit;

  template <class Num, class Visit, class Prune>
  void run(const std::vector<Num>& w, Visit&& visit, Prune&&) const {
    const int n = m->n();
    Counter counter(limit);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto make = [&]() -> Solution { return Tour{order}; };
    do {
      if (order[1] > order[n - 1]) continue;
      counter.tick();
      ElementSet s;
      Num c{0};
      for (int i = 0; i < n; ++i) {
        int id = pair_id(n, order[i], order[(i + 1) % n]);
        s.set(id);
        c += w[id];
      }
      visit(static_cast<const ElementSet&>(s), c, make);
    } while (std::next_permutation(order.begin() + 1, order.end()));
  }
};

struct SolutionSpace {
  Sense sense;
  std::vector<Rational> weights;
  std::variant<McEnum, NodeEnum, GraphEnum, TspEnum> en;
};

inline SolutionSpace space_for(const MultiwayCutInstance& inst, const EnumerationBudget& budget) {
  const auto& g = inst.graph;
  check_capacity(g.m());
  std::vector<int> free_vertices;
  for (int v = 0; v < g.n(); ++v)
    if (inst.terminal_index(v) < 0) free_vertices.push_back(v);
  if (static_cast<int>(free_vertices.size()) > budget.max_mc_nonterminals)
    throw BudgetExceeded("too many non-terminals for enumeration");
  std::vector<Rational> w;
  for (const auto& e : g.edges()) w.push_back(e.w);
  return {Sense::minimize, std::move(w), McEnum{&inst, std::move(free_vertices), budget.max_solutions}};
}

inline SolutionSpace space_for(const NodeMultiwayCutInstance& inst, const EnumerationBudget& budget) {
  const auto& g = inst.graph;
  check_capacity(g.n());
  std::vector<int> free_vertices;
  for (int v = 0; v < g.n(); ++v)
    if (!inst.is_terminal(v)) free_vertices.push_back(v);
  if (static_cast<int>(free_vertices.size()) > std::min(budget.max_graph_n, 40))
    throw BudgetExceeded("too many non-terminals for enumeration");
  return {Sense::minimize, g.weights(), NodeEnum{&inst, std::move(free_vertices), budget.max_solutions}};
}

inline SolutionSpace graph_space(const VertexWeightedGraph& g, const EnumerationBudget& budget, bool complement) {
  check_capacity(g.n());
  if (g.n() > budget.max_graph_n) throw BudgetExceeded("graph too large for enumeration");
  return {complement ? Sense::minimize : Sense::maximize, g.weights(), GraphEnum{&g, complement, budget.max_solutions}};
}

inline SolutionSpace space_for(const TspInstance& inst, const EnumerationBudget& budget) {
  const auto& m = inst.metric;
  const int n = m.n();
  if (n < 3) throw InvalidInstance("tour needs at least 3 points");
  if (n > budget.max_tsp_n) throw BudgetExceeded("too many points for tour enumeration");
  check_capacity(n * n);
  std::vector<Rational> w(n * n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) w[pair_id(n, u, v)] = m.d(u, v);
  return {Sense::minimize, std::move(w), TspEnum{&m, budget.max_solutions}};
}

inline SolutionSpace space_for_instance(const Instance& inst, const EnumerationBudget& budget) {
  return std::visit(
      [&](const auto& i) -> SolutionSpace {
        using I = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<I, MultiwayCutInstance> || std::is_same_v<I, NodeMultiwayCutInstance> ||
                      std::is_same_v<I, TspInstance>)
          return space_for(i, budget);
        else if constexpr (std::is_same_v<I, MisInstance>)
          return graph_space(i.graph, budget, false);
        else if constexpr (std::is_same_v<I, VertexCoverInstance>)
          return graph_space(i.graph, budget, true);
        else
          throw Unsupported("clustering has no set-difference stability oracle");
      },
      inst);
}

inline ElementSet elements_of(const Solution& sol) {
  ElementSet s;
  std::visit(
      [&](const auto& x) {
        using S = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<S, EdgeCut>) {
          for (int e : x.edges) s.set(e);
        } else if constexpr (std::is_same_v<S, NodeCut> || std::is_same_v<S, IndependentSet> ||
                             std::is_same_v<S, VertexCover>) {
          for (int v : x.vertices) s.set(v);
        } else if constexpr (std::is_same_v<S, Tour>) {
          int n = static_cast<int>(x.order.size());
          for (int i = 0; i < n; ++i) s.set(pair_id(n, x.order[i], x.order[(i + 1) % n]));
        } else {
          throw Unsupported("clustering has no element representation");
        }
      },
      sol);
  return s;
}

// Streams a solution space with numbers of type Num: scaled int64 when all
// totals fit, Rational otherwise.
template <class Num>
struct Scan {
  const SolutionSpace& sp;
  std::vector<Num> w;
  Rational scale;

  Rational exact(const Num& x) const { return to_rational(x, scale); }

  Num sum_minus(const ElementSet& a, const ElementSet& b) const {
    Num s{0};
    a.for_each_minus(b, [&](int i) { s += w[i]; });
    return s;
  }

  template <class Visit, class Prune>
  void run(Visit&& visit, Prune&& prune) const {
    std::visit([&](const auto& en) { en.run(w, visit, prune); }, sp.en);
  }

  struct Best {
    bool found = false;
    Num cost{0};
    ElementSet set;
    std::optional<Solution> sol;
    bool unique = true;
    std::optional<Solution> tie;
  };

  Best optimum() const {
    Best b;
    const bool minimize = sp.sense == Sense::minimize;
    run(
        [&](const ElementSet& set, const Num& cost, const auto& make) {
          if (!b.found || (minimize ? cost < b.cost : b.cost < cost)) {
            b.found = true;
            b.cost = cost;
            b.set = set;
            b.sol = make();
            b.unique = true;
            b.tie.reset();
          } else if (cost == b.cost && b.unique && !(set == b.set)) {
            b.unique = false;
            b.tie = make();
          }
        },
        [&](const Num& partial) { return minimize && b.found && b.cost < partial; });
    return b;
  }

  // Minimum over S != opt of the set-difference ratio of the stability definition.
  void margin(const ElementSet& opt, ExtRational& gamma, std::optional<Solution>& witness) const {
    const bool minimize = sp.sense == Sense::minimize;
    bool have = false;
    Num bn{0}, bd{0};
    run(
        [&](const ElementSet& set, const Num&, const auto& make) {
          if (set == opt) return;
          Num s_minus = sum_minus(set, opt), o_minus = sum_minus(opt, set);
          const Num& num = minimize ? s_minus : o_minus;
          const Num& den = minimize ? o_minus : s_minus;
          if (den == Num{0}) return;
          if (!have || less_ratio(num, den, bn, bd)) {
            have = true;
            bn = num;
            bd = den;
            witness = make();
          }
        },
        [](const Num&) { return false; });
    if (have) gamma = ExtRational(exact(bn) / exact(bd));
    else gamma = ExtRational::infinity();
  }
};

inline mpz_class lcm_of_denominators(const std::vector<Rational>& ws) {
  mpz_class l = 1;
  for (const auto& w : ws) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w.den().get_mpz_t());
  return l;
}

template <class F>
auto with_scan(const SolutionSpace& sp, F&& f) {
  mpz_class l = lcm_of_denominators(sp.weights);
  mpz_class total = 0;
  for (const auto& w : sp.weights) total += w.num() * (l / w.den());
  if (l.fits_slong_p() && total < (mpz_class(1) << 60)) {
    Scan<std::int64_t> s{sp, {}, Rational(l)};
    for (const auto& x : sp.weights) s.w.push_back((x * s.scale).num().get_si());
    return f(s);
  }
  Scan<Rational> s{sp, sp.weights, Rational(1)};
  return f(s);
}

inline OptimumSummary clustering_optimum(const MetricInstance& m, bool center_objective,
                                         const EnumerationBudget& budget, std::vector<Solution>* all) {
  const int f = m.num_facilities(), k = m.k();
  // C(f, k) guard before enumerating
  mpz_class combos;
  mpz_bin_uiui(combos.get_mpz_t(), f, k);
  if (combos > budget.max_center_sets || combos > budget.max_solutions)
    throw BudgetExceeded("too many center sets for enumeration");
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  OptimumSummary out;
  bool found = false;
  for (;;) {
    Rational c = center_objective ? kcenter_cost(m, pick) : kmedian_cost(m, pick);
    if (all) all->push_back(clustering_from_centers(m, pick));
    if (!found || c < out.cost) {
      found = true;
      out.cost = c;
      out.optimum = clustering_from_centers(m, pick);
      out.unique = true;
      out.other_optimum.reset();
    } else if (c == out.cost && out.unique) {
      out.unique = false;
      out.other_optimum = clustering_from_centers(m, pick);
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == f - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

// All feasible solutions, canonicalized and without duplicates.
inline std::vector<Solution> enumerate_solutions(const Instance& inst,
                                                 const EnumerationBudget& budget = EnumerationBudget::from_env()) {
  std::vector<Solution> out;
  if (auto* kc = std::get_if<KCenterInstance>(&inst)) {
    detail::clustering_optimum(kc->metric, true, budget, &out);
    return out;
  }
  if (auto* km = std::get_if<KMedianInstance>(&inst)) {
    detail::clustering_optimum(km->metric, false, budget, &out);
    return out;
  }
  auto sp = detail::space_for_instance(inst, budget);
  std::unordered_set<detail::ElementSet, detail::ElementSetHash> seen;
  std::visit(
      [&](const auto& en) {
        en.run(
            sp.weights,
            [&](const detail::ElementSet& set, const Rational&, const auto& make) {
              if (seen.insert(set).second) out.push_back(make());
            },
            [](const Rational&) { return false; });
      },
      sp.en);
  return out;
}

inline OptimumSummary brute_force_optimum(const Instance& inst,
                                          const EnumerationBudget& budget = EnumerationBudget::from_env()) {
  if (auto* kc = std::get_if<KCenterInstance>(&inst)) return detail::clustering_optimum(kc->metric, true, budget, nullptr);
  if (auto* km = std::get_if<KMedianInstance>(&inst))
    return detail::clustering_optimum(km->metric, false, budget, nullptr);
  auto sp = detail::space_for_instance(inst, budget);
  return detail::with_scan(sp, [&](const auto& scan) {
    auto b = scan.optimum();
    if (!b.found) throw InfeasibleSolution("instance has no feasible solution");
    return OptimumSummary{*b.sol, scan.exact(b.cost), b.unique, b.tie};
  });
}

// Exact margin: the instance is gamma-stable exactly for gamma < gamma_star.
inline StabilityReport stability_margin(const Instance& inst,
                                        const EnumerationBudget& budget = EnumerationBudget::from_env()) {
  auto sp = detail::space_for_instance(inst, budget);
  return detail::with_scan(sp, [&](const auto& scan) {
    auto b = scan.optimum();
    if (!b.found) throw InfeasibleSolution("instance has no feasible solution");
    StabilityReport r;
    r.optimum = *b.sol;
    r.optimum_cost = scan.exact(b.cost);
    if (!b.unique) {
      r.is_unique_optimum = false;
      r.gamma_star = ExtRational(Rational(1));
      r.witness = b.tie;
      return r;
    }
    scan.margin(b.set, r.gamma_star, r.witness);
    return r;
  });
}

struct InNeighborhood {};
struct Violator {
  Solution better;
};
using WeakCertificate = std::variant<InNeighborhood, Violator>;

// Whether `solution` can be left out of the neighborhood of a (gamma, N)-weakly
// stable instance: it can iff the optimum beats it under the perturbation
// that favors it most. In that case the optimum is returned as the violator.
inline WeakCertificate weak_stability_certificate(const Instance& inst, const Solution& solution, const Rational& gamma,
                                                  const EnumerationBudget& budget = EnumerationBudget::from_env()) {
  if (!check_feasible(inst, solution)) throw InfeasibleSolution("solution is infeasible");
  auto sp = detail::space_for_instance(inst, budget);
  auto opt = brute_force_optimum(inst, budget);
  auto o = detail::elements_of(opt.optimum);
  auto x = detail::elements_of(solution);
  Rational o_minus, x_minus;
  o.for_each_minus(x, [&](int i) { o_minus += sp.weights[i]; });
  x.for_each_minus(o, [&](int i) { x_minus += sp.weights[i]; });
  bool beaten = sp.sense == Sense::minimize ? gamma * o_minus < x_minus : o_minus > gamma * x_minus;
  if (beaten) return Violator{opt.optimum};
  return InNeighborhood{};
}

}  // namespace stablecut
