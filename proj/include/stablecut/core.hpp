#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stablecut/rational.hpp"

namespace stablecut {

struct InvalidInstance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct VariantMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InfeasibleSolution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  int u;
  int v;
  Rational w;
};

class EdgeWeightedGraph {
 public:
  EdgeWeightedGraph() = default;
  EdgeWeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw InvalidInstance("negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
      if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) throw InvalidInstance("edge endpoint out of range");
      if (e.u == e.v) throw InvalidInstance("self-loop");
      if (e.w.sign() <= 0) throw InvalidInstance("edge weight must be positive");
      if (!seen.insert(std::minmax(e.u, e.v)).second) throw InvalidInstance("duplicate edge");
    }
    adj_.assign(n_, {});
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
      adj_[edges_[i].u].push_back(i);
      adj_[edges_[i].v].push_back(i);
    }
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int i) const { return edges_[i]; }
  // Incident edge indices of v.
  const std::vector<int>& incident(int v) const { return adj_[v]; }
  int other(int e, int v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }

  Rational total_weight() const {
    Rational s;
    for (const auto& e : edges_) s += e.w;
    return s;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

class VertexWeightedGraph {
 public:
  VertexWeightedGraph() = default;
  VertexWeightedGraph(int n, std::vector<std::pair<int, int>> edges, std::vector<Rational> weights)
      : n_(n), weights_(std::move(weights)) {
    if (n_ < 0) throw InvalidInstance("negative vertex count");
    if (static_cast<int>(weights_.size()) != n_) throw InvalidInstance("weight count does not match n");
    for (const auto& w : weights_)
      if (w.sign() <= 0) throw InvalidInstance("vertex weight must be positive");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidInstance("edge endpoint out of range");
      if (u == v) throw InvalidInstance("self-loop");
      if (!seen.insert(std::minmax(u, v)).second) throw InvalidInstance("duplicate edge");
    }
    edges_.assign(seen.begin(), seen.end());
    adj_.assign(n_, {});
    for (auto [u, v] : edges_) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  // Sorted (u < v) pairs.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }
  bool adjacent(int u, int v) const { return std::binary_search(adj_[u].begin(), adj_[u].end(), v); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(int v) const { return weights_[v]; }

  Rational weight_of(const std::vector<int>& vs) const {
    Rational s;
    for (int v : vs) s += weights_[v];
    return s;
  }
  Rational total_weight() const {
    Rational s;
    for (const auto& w : weights_) s += w;
    return s;
  }

  // Induced subgraph on `keep` (any order); vertex i of the result is keep[i].
  VertexWeightedGraph induced(const std::vector<int>& keep) const {
    std::vector<int> pos(n_, -1);
    for (int i = 0; i < static_cast<int>(keep.size()); ++i) pos[keep[i]] = i;
    std::vector<std::pair<int, int>> es;
    std::vector<Rational> ws;
    for (int v : keep) ws.push_back(weights_[v]);
    for (auto [u, v] : edges_)
      if (pos[u] >= 0 && pos[v] >= 0) es.emplace_back(pos[u], pos[v]);
    return VertexWeightedGraph(static_cast<int>(keep.size()), std::move(es), std::move(ws));
  }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<Rational> weights_;
};

inline bool is_connected(int n, const std::vector<std::vector<int>>& adj) {
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

// Edge Multiway Cut: separate every pair of terminals by deleting edges.
struct MultiwayCutInstance {
  EdgeWeightedGraph graph;
  std::vector<int> terminals;

  MultiwayCutInstance() = default;
  MultiwayCutInstance(EdgeWeightedGraph g, std::vector<int> t) : graph(std::move(g)), terminals(std::move(t)) {
    if (terminals.size() < 2) throw InvalidInstance("need at least two terminals");
    std::set<int> s(terminals.begin(), terminals.end());
    if (s.size() != terminals.size()) throw InvalidInstance("duplicate terminal");
    for (int t : terminals)
      if (t < 0 || t >= graph.n()) throw InvalidInstance("terminal out of range");
    std::vector<std::vector<int>> adj(graph.n());
    for (const auto& e : graph.edges()) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    if (!is_connected(graph.n(), adj)) throw InvalidInstance("graph must be connected");
  }

  int k() const { return static_cast<int>(terminals.size()); }
  // Terminal index of v, or -1.
  int terminal_index(int v) const {
    auto it = std::find(terminals.begin(), terminals.end(), v);
    return it == terminals.end() ? -1 : static_cast<int>(it - terminals.begin());
  }
};

// Node Multiway Cut. Terminal weights are carried but never counted.
struct NodeMultiwayCutInstance {
  VertexWeightedGraph graph;
  std::vector<int> terminals;

  NodeMultiwayCutInstance() = default;
  NodeMultiwayCutInstance(VertexWeightedGraph g, std::vector<int> t) : graph(std::move(g)), terminals(std::move(t)) {
    if (terminals.size() < 2) throw InvalidInstance("need at least two terminals");
    std::set<int> s(terminals.begin(), terminals.end());
    if (s.size() != terminals.size()) throw InvalidInstance("duplicate terminal");
    for (int t : terminals)
      if (t < 0 || t >= graph.n()) throw InvalidInstance("terminal out of range");
    for (auto [u, v] : graph.edges())
      if (s.count(u) && s.count(v)) throw InvalidInstance("edge joins two terminals");
  }

  int k() const { return static_cast<int>(terminals.size()); }
  bool is_terminal(int v) const { return std::find(terminals.begin(), terminals.end(), v) != terminals.end(); }
};

struct MisInstance {
  VertexWeightedGraph graph;
};

struct VertexCoverInstance {
  VertexWeightedGraph graph;
};

// Candidate facilities disjoint from the clients, with client-to-facility distances.
struct SteinerFacilities {
  int m = 0;
  std::vector<std::vector<Rational>> cross;  // n x m
};

class MetricInstance {
 public:
  MetricInstance() = default;
  MetricInstance(std::vector<std::vector<Rational>> d, int k, std::optional<SteinerFacilities> steiner = std::nullopt)
      : n_(static_cast<int>(d.size())), d_(std::move(d)), k_(k), steiner_(std::move(steiner)) {
    for (const auto& row : d_)
      if (static_cast<int>(row.size()) != n_) throw InvalidInstance("distance matrix is not square");
    for (int u = 0; u < n_; ++u) {
      if (!d_[u][u].is_zero()) throw InvalidInstance("d(u,u) must be 0");
      for (int v = 0; v < n_; ++v) {
        if (d_[u][v] != d_[v][u]) throw InvalidInstance("distance matrix is not symmetric");
        if (u != v && d_[u][v].sign() <= 0) throw InvalidInstance("distinct points must have positive distance");
      }
    }
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v)
        for (int w = 0; w < n_; ++w)
          if (d_[u][w] > d_[u][v] + d_[v][w]) throw InvalidInstance("triangle inequality violated");
    if (steiner_) {
      if (static_cast<int>(steiner_->cross.size()) != n_) throw InvalidInstance("facility distance rows != n");
      for (const auto& row : steiner_->cross) {
        if (static_cast<int>(row.size()) != steiner_->m) throw InvalidInstance("facility distance row size");
        for (const auto& x : row)
          if (x.sign() < 0) throw InvalidInstance("negative facility distance");
      }
      for (int f = 0; f < steiner_->m; ++f)
        for (int u = 0; u < n_; ++u)
          for (int v = 0; v < n_; ++v)
            if (d_[u][v] > steiner_->cross[u][f] + steiner_->cross[v][f] ||
                steiner_->cross[u][f] > d_[u][v] + steiner_->cross[v][f])
              throw InvalidInstance("triangle inequality violated through a facility");
    }
    if (k_ < 1 || k_ > num_facilities()) throw InvalidInstance("k out of range");
  }

  int n() const { return n_; }
  int k() const { return k_; }
  const Rational& d(int u, int v) const { return d_[u][v]; }
  const std::vector<std::vector<Rational>>& matrix() const { return d_; }
  bool has_steiner() const { return steiner_.has_value(); }
  const std::optional<SteinerFacilities>& steiner() const { return steiner_; }
  // Candidate centers: the facilities in Steiner mode, else the points.
  int num_facilities() const { return steiner_ ? steiner_->m : n_; }
  const Rational& to_facility(int u, int f) const { return steiner_ ? steiner_->cross[u][f] : d_[u][f]; }

  MetricInstance with_k(int k) const { return MetricInstance(d_, k, steiner_); }

 private:
  int n_ = 0;
  std::vector<std::vector<Rational>> d_;
  int k_ = 1;
  std::optional<SteinerFacilities> steiner_;
};

struct KCenterInstance {
  MetricInstance metric;
};
struct KMedianInstance {
  MetricInstance metric;
};
struct TspInstance {
  MetricInstance metric;
};

using Instance = std::variant<MultiwayCutInstance, NodeMultiwayCutInstance, MisInstance, VertexCoverInstance,
                              KCenterInstance, KMedianInstance, TspInstance>;

// Edge cut stored as the boundary of a terminal partition. `edges` is sorted and
// is the identity of the solution; `part` (terminal index per vertex) is kept
// when known.
struct EdgeCut {
  std::vector<int> edges;
  std::vector<int> part;
  friend bool operator==(const EdgeCut& a, const EdgeCut& b) { return a.edges == b.edges; }
};

struct NodeCut {
  std::vector<int> vertices;
  friend bool operator==(const NodeCut&, const NodeCut&) = default;
};

struct IndependentSet {
  std::vector<int> vertices;
  friend bool operator==(const IndependentSet&, const IndependentSet&) = default;
};

struct VertexCover {
  std::vector<int> vertices;
  friend bool operator==(const VertexCover&, const VertexCover&) = default;
};

// Centers are facility indices (points in the no-Steiner case). assign[u] is an
// index into `centers`.
struct Clustering {
  std::vector<int> centers;
  std::vector<int> assign;
  friend bool operator==(const Clustering&, const Clustering&) = default;
};

struct Tour {
  std::vector<int> order;
  // Same cycle regardless of rotation and direction.
  friend bool operator==(const Tour& a, const Tour& b) { return a.canonical().order == b.canonical().order; }

  Tour canonical() const {
    if (order.size() < 3) return *this;
    auto it = std::min_element(order.begin(), order.end());
    std::vector<int> o(it, order.end());
    o.insert(o.end(), order.begin(), it);
    if (o[1] > o.back()) std::reverse(o.begin() + 1, o.end());
    return Tour{o};
  }
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> es;
    for (std::size_t i = 0; i < order.size(); ++i) es.push_back(std::minmax(order[i], order[(i + 1) % order.size()]));
    std::sort(es.begin(), es.end());
    return es;
  }
};

using Solution = std::variant<EdgeCut, NodeCut, IndependentSet, VertexCover, Clustering, Tour>;

enum class Sense { minimize, maximize };

inline Sense objective_sense(const Instance& inst) {
  return std::holds_alternative<MisInstance>(inst) ? Sense::maximize : Sense::minimize;
}

inline std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Boundary of a partition given as terminal index per vertex.
inline EdgeCut edge_cut_from_partition(const MultiwayCutInstance& inst, std::vector<int> part) {
  if (static_cast<int>(part.size()) != inst.graph.n()) throw InfeasibleSolution("partition size != n");
  for (int i = 0; i < inst.k(); ++i)
    if (part[inst.terminals[i]] != i) throw InfeasibleSolution("terminal not in its own part");
  for (int p : part)
    if (p < 0 || p >= inst.k()) throw InfeasibleSolution("part index out of range");
  EdgeCut c;
  for (int i = 0; i < inst.graph.m(); ++i)
    if (part[inst.graph.edge(i).u] != part[inst.graph.edge(i).v]) c.edges.push_back(i);
  c.part = std::move(part);
  return c;
}

namespace detail {

// Vertices reachable from `start` in `g` without using removed edges.
inline std::vector<char> reach_edges(const EdgeWeightedGraph& g, int start, const std::vector<char>& removed) {
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      if (removed[e]) continue;
      int w = g.other(e, v);
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

inline std::vector<char> reach_vertices(const VertexWeightedGraph& g, int start, const std::vector<char>& removed) {
  std::vector<char> seen(g.n(), 0);
  if (removed[start]) return seen;
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v))
      if (!removed[w] && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

inline bool valid_vertex_set(const std::vector<int>& vs, int n) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i] < 0 || vs[i] >= n) return false;
    if (i > 0 && vs[i] <= vs[i - 1]) return false;
  }
  return true;
}

inline Rational center_distance(const MetricInstance& m, int u, const std::vector<int>& centers) {
  Rational best = m.to_facility(u, centers.at(0));
  for (int c : centers) best = min(best, m.to_facility(u, c));
  return best;
}

template <class T>
std::string variant_name() {
  if constexpr (std::is_same_v<T, MultiwayCutInstance>) return "edge_mc";
  else if constexpr (std::is_same_v<T, NodeMultiwayCutInstance>) return "node_mc";
  else if constexpr (std::is_same_v<T, MisInstance>) return "mis";
  else if constexpr (std::is_same_v<T, VertexCoverInstance>) return "vc";
  else if constexpr (std::is_same_v<T, KCenterInstance>) return "kcenter";
  else if constexpr (std::is_same_v<T, KMedianInstance>) return "kmedian";
  else if constexpr (std::is_same_v<T, TspInstance>) return "tsp";
  else if constexpr (std::is_same_v<T, EdgeCut>) return "edge_cut";
  else if constexpr (std::is_same_v<T, NodeCut>) return "node_cut";
  else if constexpr (std::is_same_v<T, IndependentSet>) return "independent_set";
  else if constexpr (std::is_same_v<T, VertexCover>) return "vertex_cover";
  else if constexpr (std::is_same_v<T, Clustering>) return "clustering";
  else return "tour";
}

}  // namespace detail

inline bool is_feasible(const MultiwayCutInstance& inst, const EdgeCut& c) {
  const auto& g = inst.graph;
  std::vector<char> removed(g.m(), 0);
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    if (c.edges[i] < 0 || c.edges[i] >= g.m()) return false;
    if (i > 0 && c.edges[i] <= c.edges[i - 1]) return false;
    removed[c.edges[i]] = 1;
  }
  for (int i = 0; i < inst.k(); ++i) {
    auto seen = detail::reach_edges(g, inst.terminals[i], removed);
    for (int j = i + 1; j < inst.k(); ++j)
      if (seen[inst.terminals[j]]) return false;
  }
  return true;
}

inline bool is_feasible(const NodeMultiwayCutInstance& inst, const NodeCut& c) {
  const auto& g = inst.graph;
  if (!detail::valid_vertex_set(c.vertices, g.n())) return false;
  std::vector<char> removed(g.n(), 0);
  for (int v : c.vertices) {
    if (inst.is_terminal(v)) return false;
    removed[v] = 1;
  }
  for (int i = 0; i < inst.k(); ++i) {
    auto seen = detail::reach_vertices(g, inst.terminals[i], removed);
    for (int j = i + 1; j < inst.k(); ++j)
      if (seen[inst.terminals[j]]) return false;
  }
  return true;
}

inline bool is_feasible(const MisInstance& inst, const IndependentSet& s) {
  if (!detail::valid_vertex_set(s.vertices, inst.graph.n())) return false;
  for (std::size_t i = 0; i < s.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < s.vertices.size(); ++j)
      if (inst.graph.adjacent(s.vertices[i], s.vertices[j])) return false;
  return true;
}

inline bool is_feasible(const VertexCoverInstance& inst, const VertexCover& s) {
  if (!detail::valid_vertex_set(s.vertices, inst.graph.n())) return false;
  std::vector<char> in(inst.graph.n(), 0);
  for (int v : s.vertices) in[v] = 1;
  for (auto [u, v] : inst.graph.edges())
    if (!in[u] && !in[v]) return false;
  return true;
}

inline bool is_feasible(const MetricInstance& m, const Clustering& c) {
  if (static_cast<int>(c.centers.size()) != m.k()) return false;
  std::set<int> cs;
  for (int f : c.centers) {
    if (f < 0 || f >= m.num_facilities()) return false;
    cs.insert(f);
  }
  if (static_cast<int>(cs.size()) != m.k()) return false;
  if (static_cast<int>(c.assign.size()) != m.n()) return false;
  for (int a : c.assign)
    if (a < 0 || a >= m.k()) return false;
  return true;
}

inline bool is_feasible(const MetricInstance& m, const Tour& t) {
  if (static_cast<int>(t.order.size()) != m.n() || m.n() < 3) return false;
  std::vector<char> seen(m.n(), 0);
  for (int v : t.order) {
    if (v < 0 || v >= m.n() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline Rational cost(const MultiwayCutInstance& inst, const EdgeCut& c) {
  Rational s;
  for (int e : c.edges) s += inst.graph.edge(e).w;
  return s;
}
inline Rational cost(const NodeMultiwayCutInstance& inst, const NodeCut& c) { return inst.graph.weight_of(c.vertices); }
inline Rational cost(const MisInstance& inst, const IndependentSet& s) { return inst.graph.weight_of(s.vertices); }
inline Rational cost(const VertexCoverInstance& inst, const VertexCover& s) { return inst.graph.weight_of(s.vertices); }

inline Rational kcenter_cost(const MetricInstance& m, const std::vector<int>& centers) {
  Rational r;
  for (int u = 0; u < m.n(); ++u) r = max(r, detail::center_distance(m, u, centers));
  return r;
}
inline Rational kmedian_cost(const MetricInstance& m, const std::vector<int>& centers) {
  Rational r;
  for (int u = 0; u < m.n(); ++u) r += detail::center_distance(m, u, centers);
  return r;
}
inline Rational tour_cost(const MetricInstance& m, const Tour& t) {
  Rational s;
  for (std::size_t i = 0; i < t.order.size(); ++i) s += m.d(t.order[i], t.order[(i + 1) % t.order.size()]);
  return s;
}

inline bool check_feasible(const Instance& inst, const Solution& sol) {
  return std::visit(
      [](const auto& i, const auto& s) -> bool {
        using I = std::decay_t<decltype(i)>;
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<I, MultiwayCutInstance> && std::is_same_v<S, EdgeCut>) return is_feasible(i, s);
        else if constexpr (std::is_same_v<I, NodeMultiwayCutInstance> && std::is_same_v<S, NodeCut>) return is_feasible(i, s);
        else if constexpr (std::is_same_v<I, MisInstance> && std::is_same_v<S, IndependentSet>) return is_feasible(i, s);
        else if constexpr (std::is_same_v<I, VertexCoverInstance> && std::is_same_v<S, VertexCover>) return is_feasible(i, s);
        else if constexpr ((std::is_same_v<I, KCenterInstance> || std::is_same_v<I, KMedianInstance>) &&
                           std::is_same_v<S, Clustering>)
          return is_feasible(i.metric, s);
        else if constexpr (std::is_same_v<I, TspInstance> && std::is_same_v<S, Tour>) return is_feasible(i.metric, s);
        else
          throw VariantMismatch("solution " + detail::variant_name<S>() + " does not fit instance " +
                                detail::variant_name<I>());
      },
      inst, sol);
}

inline Rational solution_cost(const Instance& inst, const Solution& sol) {
  if (!check_feasible(inst, sol)) throw InfeasibleSolution("solution is infeasible");
  return std::visit(
      [](const auto& i, const auto& s) -> Rational {
        using I = std::decay_t<decltype(i)>;
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<I, KCenterInstance> && std::is_same_v<S, Clustering>)
          return kcenter_cost(i.metric, s.centers);
        else if constexpr (std::is_same_v<I, KMedianInstance> && std::is_same_v<S, Clustering>)
          return kmedian_cost(i.metric, s.centers);
        else if constexpr (std::is_same_v<I, TspInstance> && std::is_same_v<S, Tour>)
          return tour_cost(i.metric, s);
        else if constexpr (requires { cost(i, s); })
          return cost(i, s);
        else
          throw VariantMismatch("solution does not fit instance");
      },
      inst, sol);
}

// Voronoi assignment of points to the given centers, ties to the earlier center.
inline Clustering clustering_from_centers(const MetricInstance& m, std::vector<int> centers) {
  std::sort(centers.begin(), centers.end());
  Clustering c;
  c.assign.resize(m.n());
  for (int u = 0; u < m.n(); ++u) {
    int best = 0;
    for (int j = 1; j < static_cast<int>(centers.size()); ++j)
      if (m.to_facility(u, centers[j]) < m.to_facility(u, centers[best])) best = j;
    c.assign[u] = best;
  }
  c.centers = std::move(centers);
  return c;
}

}  // namespace stablecut
