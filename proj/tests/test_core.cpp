#include <gtest/gtest.h>

#include "stablecut/core.hpp"
#include "stablecut/multiway_cut.hpp"
#include "stablecut/random_instances.hpp"

using namespace stablecut;

namespace {
MultiwayCutInstance path_s1_a_s2() {
  return MultiwayCutInstance(EdgeWeightedGraph(3, {{0, 1, 1}, {1, 2, 1}}), {0, 2});
}
}  // namespace

TEST(Core, PathCutFeasibility) {
  Instance inst = path_s1_a_s2();
  EXPECT_TRUE(check_feasible(inst, Solution(EdgeCut{{0}, {}})));
  EXPECT_FALSE(check_feasible(inst, Solution(EdgeCut{{}, {}})));
}

TEST(Core, AdjacentPairIsNotIndependent) {
  Instance inst = MisInstance{VertexWeightedGraph(2, {{0, 1}}, {1, 1})};
  EXPECT_FALSE(check_feasible(inst, Solution(IndependentSet{{0, 1}})));
  EXPECT_EQ(solution_cost(inst, Solution(IndependentSet{})), Rational(0));
}

TEST(Core, VariantMismatchIsTyped) {
  Instance inst = path_s1_a_s2();
  EXPECT_THROW(check_feasible(inst, Solution(Tour{{0, 1, 2}})), VariantMismatch);
  EXPECT_THROW(solution_cost(inst, Solution(IndependentSet{})), VariantMismatch);
}

TEST(Core, InfeasibleCostThrows) {
  Instance inst = path_s1_a_s2();
  EXPECT_THROW(solution_cost(inst, Solution(EdgeCut{{}, {}})), InfeasibleSolution);
}

TEST(Core, FreundKarloffCanonicalCutCostsFour) {
  auto fk = gen_freund_karloff(3);
  EXPECT_EQ(solution_cost(Instance(fk), Solution(freund_karloff_optimum(fk))), Rational(4));
}

TEST(Core, TwoPairsClusteringCostsOne) {
  MetricInstance m({{0, 1, 100, 100}, {1, 0, 100, 100}, {100, 100, 0, 1}, {100, 100, 1, 0}}, 2);
  EXPECT_EQ(solution_cost(Instance(KCenterInstance{m}), Solution(clustering_from_centers(m, {0, 2}))), Rational(1));
  EXPECT_EQ(solution_cost(Instance(KMedianInstance{m}), Solution(clustering_from_centers(m, {0, 2}))), Rational(2));
}

TEST(Core, EdgeCutsFromPartitionsWithEqualBoundaryCompareEqual) {
  // triangle s1, s2, a with a cut off from both sides in two ways
  MultiwayCutInstance inst(EdgeWeightedGraph(3, {{0, 2, 1}, {1, 2, 1}, {0, 1, 1}}), {0, 1});
  auto a = edge_cut_from_partition(inst, {0, 1, 0});
  auto b = edge_cut_from_partition(inst, {0, 1, 1});
  EXPECT_FALSE(a == b);
  EXPECT_EQ(a, (EdgeCut{a.edges, {}}));
}

TEST(Core, InstanceValidation) {
  EXPECT_THROW(EdgeWeightedGraph(2, {{0, 0, 1}}), InvalidInstance);
  EXPECT_THROW(EdgeWeightedGraph(2, {{0, 1, 0}}), InvalidInstance);
  EXPECT_THROW(EdgeWeightedGraph(2, {{0, 1, 1}, {1, 0, 2}}), InvalidInstance);
  EXPECT_THROW(MultiwayCutInstance(EdgeWeightedGraph(3, {{0, 1, 1}}), {0, 2}), InvalidInstance);
  EXPECT_THROW(NodeMultiwayCutInstance(VertexWeightedGraph(2, {{0, 1}}, {1, 1}), {0, 1}), InvalidInstance);
  EXPECT_THROW(VertexWeightedGraph(2, {}, {1, Rational(-1)}), InvalidInstance);
  EXPECT_THROW(MetricInstance({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, 1), InvalidInstance);
  EXPECT_THROW(MetricInstance({{0, 1}, {2, 0}}, 1), InvalidInstance);
  EXPECT_THROW(MetricInstance({{0, 1}, {1, 0}}, 3), InvalidInstance);
}

TEST(Core, CostScalesLinearly) {
  Rng rng(1);
  for (int it = 0; it < 20; ++it) {
    auto inst = random_multiway_cut(rng, 6, 3);
    std::vector<Edge> es = inst.graph.edges();
    for (auto& e : es) e.w *= Rational(5, 2);
    MultiwayCutInstance scaled(EdgeWeightedGraph(6, es), inst.terminals);
    Partition p(6);
    for (int v = 0; v < 6; ++v) p[v] = v < 3 ? v : uniform_int(rng, 0, 2);
    auto c = edge_cut_from_partition(inst, p);
    EXPECT_EQ(solution_cost(Instance(scaled), Solution(c)), Rational(5, 2) * solution_cost(Instance(inst), Solution(c)));
  }
}

TEST(Core, TourEqualityIgnoresRotationAndDirection) {
  EXPECT_EQ((Tour{{0, 1, 2, 3}}), (Tour{{2, 1, 0, 3}}));
  EXPECT_FALSE((Tour{{0, 1, 2, 3}}) == (Tour{{0, 2, 1, 3}}));
}
