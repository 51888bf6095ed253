#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stablecut/independent_set.hpp"
#include "stablecut/random_instances.hpp"
#include "stablecut/stability_oracle.hpp"

using namespace stablecut;

namespace {

VertexWeightedGraph triangle(Rational a, Rational b, Rational c) {
  return VertexWeightedGraph(3, {{0, 1}, {1, 2}, {0, 2}}, {a, b, c});
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// A graph with a unique optimum, scaled so the oracle confirms margin > gamma.
struct Stable {
  VertexWeightedGraph g;
  StabilityReport report;
};

std::optional<Stable> make_stable(const VertexWeightedGraph& base, const Rational& gamma) {
  auto bf = brute_force_optimum(Instance(MisInstance{base}));
  if (!bf.unique) return std::nullopt;
  auto g = gen_stable_mis(base, gamma, std::get<IndependentSet>(bf.optimum));
  auto r = stability_margin(Instance(MisInstance{g}));
  if (!(r.gamma_star > ExtRational(gamma))) return std::nullopt;
  return Stable{g, r};
}

}  // namespace

TEST(IndependentSet, StandardLpValues) {
  auto r = solve_mis_lp(triangle(1, 1, 1));
  EXPECT_EQ(r.lp.objective, Rational(3, 2));
  EXPECT_EQ(r.v_half.size(), 3u);
  auto one = solve(build_mis_lp(VertexWeightedGraph(1, {}, {7})));
  EXPECT_EQ(one.objective, Rational(7));
  EXPECT_EQ(one.values[0], Rational(1));
}

TEST(IndependentSet, TightColorableExample) {
  auto g = gen_colorable_tight(3, Rational(2, 5), 5);
  EXPECT_EQ(g.weight(2), Rational(9, 5));
  EXPECT_EQ(g.weight(3), Rational(1, 20));
  auto bf = brute_force_optimum(Instance(MisInstance{g}));
  EXPECT_EQ(bf.cost, Rational(9, 5));
  EXPECT_EQ(std::get<IndependentSet>(bf.optimum).vertices, std::vector<int>{2});
  EXPECT_EQ(solve(build_mis_lp(g)).objective, Rational(39, 20));
  EXPECT_GE(stability_margin(Instance(MisInstance{g})).gamma_star, ExtRational(Rational(8, 5)));
  EXPECT_EQ(robust_colorable(g).verdict, Verdict::not_stable);
}

TEST(IndependentSet, RobustColorableSmallCases) {
  auto heavy = triangle(1, 1, 5);
  // every competitor is a single light vertex
  EXPECT_EQ(stability_margin(Instance(MisInstance{heavy})).gamma_star, ExtRational(Rational(5)));
  auto r = robust_colorable(heavy);
  EXPECT_EQ(r.verdict, Verdict::optimal);
  EXPECT_EQ(r.solution->vertices, std::vector<int>{2});

  VertexWeightedGraph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, {1, 1, 1, 1, 1});
  auto rc = robust_colorable(c5);
  EXPECT_EQ(rc.verdict, Verdict::optimal);
  EXPECT_EQ(c5.weight_of(rc.solution->vertices), Rational(2));
  EXPECT_TRUE(is_feasible(MisInstance{c5}, *rc.solution));
}

TEST(IndependentSet, PathsAndCyclesDpMatchesBruteForce) {
  Rng rng(41);
  for (int it = 0; it < 100; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 1, 9), 0.5, 6, 2);
    auto r = robust_colorable(g);
    ASSERT_EQ(r.verdict, Verdict::optimal);
    EXPECT_TRUE(is_feasible(MisInstance{g}, *r.solution));
    EXPECT_EQ(g.weight_of(r.solution->vertices), brute_force_optimum(Instance(MisInstance{g})).cost);
  }
}

TEST(IndependentSet, CliqueComponentsAreStripped) {
  // K4 on 0..3 next to a star centered at 4 (Delta = 3)
  VertexWeightedGraph g(8, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {4, 7}},
                        {1, 4, 2, 3, 10, 1, 1, 1});
  auto r = robust_colorable(g);
  ASSERT_EQ(r.verdict, Verdict::optimal);
  EXPECT_EQ(r.solution->vertices, (std::vector<int>{1, 4}));
}

TEST(IndependentSet, RobustColorableIsSound) {
  Rng rng(42);
  int optimal = 0;
  for (int it = 0; it < 80; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 3, 8), 0.45);
    auto r = robust_colorable(g);
    auto ref = oracle::margin(oracle::independent_sets(g));
    if (r.verdict == Verdict::optimal) {
      ++optimal;
      EXPECT_EQ(g.weight_of(r.solution->vertices), ref.opt_value);
      if (ref.unique) {
        EXPECT_EQ(as_set(r.solution->vertices), ref.opt);
      }
    }
  }
  EXPECT_GT(optimal, 20);
}

TEST(IndependentSet, StableThreeColorableGraphsHaveIntegralLp) {
  Rng rng(43);
  int checked = 0;
  for (int it = 0; it < 60; ++it) {
    auto s = make_stable(random_three_colorable(rng, uniform_int(rng, 4, 8), 0.6), Rational(5, 2));
    if (!s) continue;
    ++checked;
    auto lp = solve_mis_lp(s->g);
    EXPECT_TRUE(lp.v_half.empty());
    EXPECT_EQ(lp.v1, std::get<IndependentSet>(s->report.optimum).vertices);
  }
  EXPECT_GE(checked, 20);
}

TEST(IndependentSet, HochbaumRounding) {
  auto g = triangle(1, 1, 1);
  std::vector<Rational> half(3, Rational(1, 2));
  auto outs = hochbaum_rounding(g, half, Coloring{{0, 1, 2}, 3});
  ASSERT_EQ(outs.size(), 3u);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(outs[j].outcome.vertices, std::vector<int>{j});
    EXPECT_EQ(outs[j].probability, Rational(1, 3));
  }
  EXPECT_THROW(hochbaum_rounding(g, half, Coloring{{0, 0, 1}, 2}), std::invalid_argument);
  std::vector<Rational> integral{1, 0, 0};
  for (const auto& o : hochbaum_rounding(g, integral, Coloring{{0, 0, 0}, 1}))
    EXPECT_EQ(o.outcome.vertices, std::vector<int>{0});
}

TEST(IndependentSet, HochbaumContractOnRandomGraphs) {
  Rng rng(44);
  for (int it = 0; it < 60; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 3, 9), 0.5);
    auto lp = solve_mis_lp(g);
    auto wp = welsh_powell_bound(g.induced(lp.v_half));
    Coloring col{std::vector<int>(g.n(), 0), std::max(wp.coloring.c, 2)};  // contract needs k >= 2
    for (std::size_t i = 0; i < lp.v_half.size(); ++i) col.color[lp.v_half[i]] = wp.coloring.color[i];
    auto outs = hochbaum_rounding(g, lp.lp.values, col);
    const int k = col.c;
    for (const auto& o : outs) EXPECT_TRUE(is_feasible(MisInstance{g}, o.outcome));
    for (int u = 0; u < g.n(); ++u) {
      Rational in;
      for (const auto& o : outs)
        if (std::binary_search(o.outcome.vertices.begin(), o.outcome.vertices.end(), u)) in += o.probability;
      const Rational& x = lp.lp.values[u];
      EXPECT_GE(in, Rational(2, k) * x);
      EXPECT_LE(Rational(1) - in, Rational(2 * (k - 1), k) * (Rational(1) - x));
    }
  }
}

TEST(IndependentSet, GreedyExamples) {
  EXPECT_EQ(greedy_mis(VertexWeightedGraph(3, {{0, 1}, {1, 2}}, {1, 5, 1})).vertices, std::vector<int>{1});
  EXPECT_EQ(greedy_mis(VertexWeightedGraph(2, {}, {2, 3})).vertices, (std::vector<int>{0, 1}));
  EXPECT_EQ(greedy_mis(triangle(2, 2, 2)).vertices, std::vector<int>{0});
}

TEST(IndependentSet, GreedySolvesDegreeStableInstances) {
  Rng rng(45);
  int trials = 0;
  while (trials < 100) {
    auto base = random_vertex_weighted(rng, uniform_int(rng, 3, 8), 0.5, 6, 4);
    const int delta = std::max(1, base.max_degree());
    auto s = make_stable(base, Rational(delta) + Rational(1, 2));
    if (!s) continue;
    ++trials;
    EXPECT_EQ(greedy_mis(s->g), std::get<IndependentSet>(s->report.optimum));
  }
}

TEST(IndependentSet, GreedyWeakCertificateInequality) {
  Rng rng(46);
  for (int it = 0; it < 80; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 2, 8), 0.5);
    auto greedy = as_set(greedy_mis(g).vertices);
    auto ref = oracle::margin(oracle::independent_sets(g));
    Rational lost, gained;
    for (int v : ref.opt)
      if (!greedy.count(v)) lost += g.weight(v);
    for (int v : greedy)
      if (!ref.opt.count(v)) gained += g.weight(v);
    EXPECT_LE(lost, Rational(std::max(1, g.max_degree())) * gained);
  }
}

TEST(IndependentSet, UnboundedDegreeAlgorithm) {
  Rng rng(47);
  for (int it = 0; it < 20; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 1, 8), 0.5);
    EXPECT_EQ(unbounded_degree_alg(g, 1), greedy_mis(g));
  }
  int trials = 0;
  for (int it = 0; it < 200 && trials < 30; ++it) {
    const int n = uniform_int(rng, 4, 9);
    auto s = make_stable(random_vertex_weighted(rng, n, 0.6), Rational(n, 2) + Rational(1, 3));
    if (!s) continue;
    ++trials;
    EXPECT_EQ(unbounded_degree_alg(s->g, 2), std::get<IndependentSet>(s->report.optimum));
  }
  EXPECT_GE(trials, 20);
  // integral LP at the first level returns straight away
  auto s = make_stable(VertexWeightedGraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {3, 1, 2, 1}), Rational(2));
  ASSERT_TRUE(s);
  EXPECT_EQ(unbounded_degree_alg(s->g, 2).vertices, (std::vector<int>{0, 2}));
}

TEST(IndependentSet, WelshPowell) {
  VertexWeightedGraph star(4, {{0, 1}, {0, 2}, {0, 3}}, {1, 1, 1, 1});
  auto a = welsh_powell_bound(star);
  EXPECT_EQ(a.bound, 2);
  EXPECT_EQ(a.coloring.c, 2);
  VertexWeightedGraph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {1, 1, 1, 1});
  EXPECT_EQ(welsh_powell_bound(k4).bound, 4);
  auto e = welsh_powell_bound(VertexWeightedGraph(3, {}, {1, 1, 1}));
  EXPECT_EQ(e.bound, 1);
  EXPECT_EQ(e.coloring.c, 1);
}

TEST(IndependentSet, ColoringBoundAndDegreeDichotomy) {
  Rng rng(48);
  for (int it = 0; it < 100; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 1, 12), 0.5);
    auto wp = welsh_powell_bound(g);
    EXPECT_TRUE(is_proper(g, wp.coloring));
    EXPECT_LE(wp.coloring.c, wp.bound);
    for (int k = 1; k <= g.n(); ++k) {
      const int c = (g.n() + k - 1) / k;
      int high = 0;
      for (int v = 0; v < g.n(); ++v) high += g.degree(v) >= c;
      EXPECT_TRUE(wp.bound <= c || high >= c + 1) << "n=" << g.n() << " k=" << k;
    }
  }
}

TEST(IndependentSet, SheraliAdams) {
  auto tri = triangle(1, 1, 1);
  auto t2 = solve_sa(tri, 2);
  EXPECT_EQ(t2.value, Rational(1));
  EXPECT_TRUE(t2.integral);
  EXPECT_EQ(solve_sa(tri, 0).value, Rational(3, 2));
  EXPECT_EQ(solve_sa(VertexWeightedGraph(2, {{0, 1}}, {1, 1}), 1).value, Rational(1));
  EXPECT_THROW(build_sa(tri, 4), std::invalid_argument);
  EXPECT_THROW(build_sa(VertexWeightedGraph(15, {}, std::vector<Rational>(15, Rational(1))), 0),
               std::invalid_argument);
}

TEST(IndependentSet, SheraliAdamsLevelsAreMonotone) {
  Rng rng(49);
  for (int it = 0; it < 12; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 3, 6), 0.5);
    const Rational opt = brute_force_optimum(Instance(MisInstance{g})).cost;
    EXPECT_EQ(solve_sa(g, 0).value, solve(build_mis_lp(g)).objective);
    Rational prev = solve_sa(g, 0).value;
    for (int t = 1; t <= 2; ++t) {
      Rational v = solve_sa(g, t).value;
      EXPECT_LE(v, prev);
      EXPECT_GE(v, opt);
      prev = v;
    }
  }
}

// A hand-listed planar graph: the octahedron.
TEST(IndependentSet, SheraliAdamsOnStablePlanarGraph) {
  VertexWeightedGraph octa(6, {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 4}, {2, 5}, {3, 4}, {3, 5}},
                           {3, 2, 1, 1, 1, 1});
  auto s = make_stable(octa, Rational(3, 2));
  ASSERT_TRUE(s);
  auto r = solve_sa(s->g, 2);
  EXPECT_TRUE(r.integral);
  EXPECT_EQ(r.value, s->report.optimum_cost);
}

TEST(IndependentSet, EstimateVertexCover) {
  EXPECT_EQ(estimate_vc(VertexWeightedGraph(3, {}, {1, 2, 3}), Rational(2), Rational(3)), Rational(0));
  VertexWeightedGraph edge(2, {{0, 1}}, {1, 3});
  Rational est = estimate_vc(edge, Rational(1), Rational(3));
  EXPECT_GE(est, Rational(1));
  EXPECT_LE(est, Rational(2));
  EXPECT_THROW(estimate_vc(edge, Rational(2), Rational(2)), std::invalid_argument);
}

TEST(IndependentSet, EstimateVertexCoverRatioOnStableGraphs) {
  Rng rng(50);
  int checked = 0;
  for (int it = 0; it < 200 && checked < 30; ++it) {
    const Rational alpha(2), beta = it % 2 ? Rational(3) : Rational(4);
    auto s = make_stable(random_vertex_weighted(rng, uniform_int(rng, 3, 8), 0.5), alpha * beta);
    if (!s) continue;
    ++checked;
    const Rational opt_vc = brute_force_optimum(Instance(VertexCoverInstance{s->g})).cost;
    const Rational est = estimate_vc(s->g, alpha, beta);
    EXPECT_LE(est, (Rational(1) + Rational(1) / (beta - 2)) * opt_vc);
    EXPECT_LE(est, Rational(2) * opt_vc);
  }
  EXPECT_GE(checked, 20);
}

TEST(IndependentSet, LocalRatioIsTwoApproximation) {
  Rng rng(51);
  for (int it = 0; it < 60; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 1, 9), 0.5);
    auto c = local_ratio_vertex_cover(g);
    EXPECT_TRUE(is_feasible(VertexCoverInstance{g}, c));
    EXPECT_LE(g.weight_of(c.vertices), Rational(2) * brute_force_optimum(Instance(VertexCoverInstance{g})).cost);
  }
}

TEST(IndependentSet, VertexDeletionProperties) {
  Rng rng(52);
  int checked = 0;
  for (int it = 0; it < 100 && checked < 15; ++it) {
    auto s = make_stable(random_vertex_weighted(rng, uniform_int(rng, 4, 8), 0.45), Rational(2));
    if (!s) continue;
    auto opt = std::get<IndependentSet>(s->report.optimum).vertices;
    if (opt.empty()) continue;
    ++checked;
    const int v = opt[0];
    std::vector<int> keep;
    for (int u = 0; u < s->g.n(); ++u)
      if (u != v && !s->g.adjacent(u, v)) keep.push_back(u);
    if (!keep.empty()) {
      auto r = stability_margin(Instance(MisInstance{s->g.induced(keep)}));
      EXPECT_GT(r.gamma_star, ExtRational(Rational(2)));
      std::vector<int> mapped;
      for (int i : std::get<IndependentSet>(r.optimum).vertices) mapped.push_back(keep[i]);
      std::vector<int> expect(opt.begin() + 1, opt.end());
      EXPECT_EQ(mapped, expect);
    }
    // drop every vertex outside the optimum that has the lowest id among its neighbors
    std::vector<int> keep2;
    std::set<int> in(opt.begin(), opt.end());
    for (int u = 0; u < s->g.n(); ++u)
      if (in.count(u) || u % 2 == 0) keep2.push_back(u);
    auto r2 = stability_margin(Instance(MisInstance{s->g.induced(keep2)}));
    EXPECT_GT(r2.gamma_star, ExtRational(Rational(2)));
  }
  EXPECT_GE(checked, 10);
}

TEST(IndependentSet, IntegralityGapDecay) {
  Rng rng(53);
  for (int b = 2; b <= 3; ++b) {
    int checked = 0;
    for (int it = 0; it < 200 && checked < 25; ++it) {
      auto s = make_stable(random_vertex_weighted(rng, uniform_int(rng, 3, 8), 0.6), Rational(2 * b));
      if (!s) continue;
      ++checked;
      const Rational lp = solve(build_mis_lp(s->g)).objective;
      EXPECT_LE(lp, (Rational(1) + Rational(1, b - 1)) * s->report.optimum_cost);
    }
    EXPECT_GE(checked, 15);
  }
}

TEST(IndependentSet, ComplementDuality) {
  Rng rng(54);
  for (int it = 0; it < 40; ++it) {
    auto g = random_vertex_weighted(rng, uniform_int(rng, 1, 8), 0.5);
    const Rational mis = brute_force_optimum(Instance(MisInstance{g})).cost;
    const Rational vc = brute_force_optimum(Instance(VertexCoverInstance{g})).cost;
    EXPECT_EQ(g.total_weight() - mis, vc);
    EXPECT_EQ(oracle::margin(oracle::vertex_covers(g)).opt_value, vc);
  }
}
