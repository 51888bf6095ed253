#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "stablecut/core.hpp"

namespace stablecut {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random spanning tree plus extra edges with probability `density`.
inline std::vector<std::pair<int, int>> random_connected_edges(Rng& rng, int n, double density) {
  std::set<std::pair<int, int>> es;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 1; i < n; ++i) {
    int j = uniform_int(rng, 0, i - 1);
    es.insert(std::minmax(perm[i], perm[j]));
  }
  std::bernoulli_distribution extra(density);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (extra(rng)) es.insert({u, v});
  return {es.begin(), es.end()};
}

// Connected graph, terminals 0..k-1, integer weights in [1, max_w].
inline MultiwayCutInstance random_multiway_cut(Rng& rng, int n, int k, int max_w = 5, double density = 0.35) {
  std::vector<Edge> es;
  for (auto [u, v] : random_connected_edges(rng, n, density)) es.push_back({u, v, Rational(uniform_int(rng, 1, max_w))});
  std::vector<int> terms(k);
  std::iota(terms.begin(), terms.end(), 0);
  return MultiwayCutInstance(EdgeWeightedGraph(n, std::move(es)), terms);
}

// Each pair is an edge with probability `density`, skipping any edge that would
// push a degree above `max_degree`.
inline std::vector<std::pair<int, int>> random_edges(Rng& rng, int n, double density, int max_degree = 1 << 20) {
  std::vector<std::pair<int, int>> pairs, es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::vector<int> deg(n, 0);
  std::bernoulli_distribution take(density);
  for (auto [u, v] : pairs)
    if (take(rng) && deg[u] < max_degree && deg[v] < max_degree) {
      es.emplace_back(u, v);
      ++deg[u];
      ++deg[v];
    }
  return es;
}

inline VertexWeightedGraph random_vertex_weighted(Rng& rng, int n, double density, int max_w = 6,
                                                  int max_degree = 1 << 20) {
  std::vector<Rational> w;
  for (int v = 0; v < n; ++v) w.push_back(Rational(uniform_int(rng, 1, max_w)));
  return VertexWeightedGraph(n, random_edges(rng, n, density, max_degree), std::move(w));
}

// Graph whose vertices are split into 3 classes with edges only across classes.
inline VertexWeightedGraph random_three_colorable(Rng& rng, int n, double density, int max_w = 6) {
  std::vector<int> cls(n);
  for (int v = 0; v < n; ++v) cls[v] = uniform_int(rng, 0, 2);
  std::vector<std::pair<int, int>> es;
  std::bernoulli_distribution take(density);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (cls[u] != cls[v] && take(rng)) es.emplace_back(u, v);
  std::vector<Rational> w;
  for (int v = 0; v < n; ++v) w.push_back(Rational(uniform_int(rng, 1, max_w)));
  return VertexWeightedGraph(n, std::move(es), std::move(w));
}

// Node multiway cut: terminals 0..k-1 with no terminal-terminal edges, connected.
inline NodeMultiwayCutInstance random_node_multiway_cut(Rng& rng, int n, int k, int max_w = 5, double density = 0.4) {
  for (;;) {
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : random_connected_edges(rng, n, density))
      if (!(u < k && v < k)) es.emplace_back(u, v);
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : es) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    if (!is_connected(n, adj)) continue;
    std::vector<Rational> w;
    for (int v = 0; v < n; ++v) w.push_back(v < k ? Rational(1) : Rational(uniform_int(rng, 1, max_w)));
    std::vector<int> terms(k);
    std::iota(terms.begin(), terms.end(), 0);
    return NodeMultiwayCutInstance(VertexWeightedGraph(n, std::move(es), std::move(w)), terms);
  }
}

// Shortest-path closure of random integer weights in [1, max_w] on K_n.
inline std::vector<std::vector<Rational>> random_metric_matrix(Rng& rng, int n, int max_w = 10) {
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) d[u][v] = d[v][u] = Rational(uniform_int(rng, 1, max_w));
  for (int m = 0; m < n; ++m)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (d[u][m] + d[m][v] < d[u][v]) d[u][v] = d[u][m] + d[m][v];
  return d;
}

// Closure of a planted random tour with short edges in [lo, hi] and long
// chords in [chord_lo, chord_hi]; tends to be stable when chords are long.
inline std::vector<std::vector<Rational>> random_planted_tour_metric(Rng& rng, int n, int lo = 2, int hi = 3,
                                                                     int chord_lo = 5, int chord_hi = 9) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) d[u][v] = d[v][u] = Rational(uniform_int(rng, chord_lo, chord_hi));
  for (int i = 0; i < n; ++i) {
    int u = perm[i], v = perm[(i + 1) % n];
    d[u][v] = d[v][u] = Rational(uniform_int(rng, lo, hi));
  }
  for (int m = 0; m < n; ++m)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (d[u][m] + d[m][v] < d[u][v]) d[u][v] = d[u][m] + d[m][v];
  return d;
}

}  // namespace stablecut
