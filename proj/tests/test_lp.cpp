#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "stablecut/lp.hpp"

using namespace stablecut;

TEST(Lp, MaximizeSingleBoundedVariable) {
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), std::nullopt, Rational(1));
  p.add_constraint({{x, 1}}, Relation::le, 1);
  auto s = solve(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_EQ(s.values[x], Rational(1));
  EXPECT_EQ(s.objective, Rational(1));
}

TEST(Lp, ContradictoryBoundsAreInfeasible) {
  LpProblem p;
  int x = p.add_variable(std::nullopt, std::nullopt);
  p.add_constraint({{x, 1}}, Relation::ge, 1);
  p.add_constraint({{x, 1}}, Relation::le, 0);
  EXPECT_EQ(solve(p).status, LpStatus::infeasible);
}

TEST(Lp, UnboundedDirection) {
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), std::nullopt, Rational(1));
  int y = p.add_variable(Rational(0), std::nullopt, Rational(0));
  p.add_constraint({{x, 1}, {y, -1}}, Relation::le, 3);
  EXPECT_EQ(solve(p).status, LpStatus::unbounded);
}

TEST(Lp, FreeAndNegativeVariables) {
  // min x + y with x free, y <= -1, x - y >= 2, x >= -5
  LpProblem p;
  int x = p.add_variable(std::nullopt, std::nullopt, 1);
  int y = p.add_variable(std::nullopt, Rational(-1), 1);
  p.add_constraint({{x, 1}, {y, -1}}, Relation::ge, 2);
  p.add_constraint({{x, 1}}, Relation::ge, -5);
  EXPECT_EQ(solve(p).status, LpStatus::unbounded);
  LpProblem q = p;
  q.add_constraint({{y, 1}}, Relation::ge, -10);
  auto t = solve(q);
  ASSERT_EQ(t.status, LpStatus::optimal);
  EXPECT_EQ(t.objective, Rational(-15));
}

TEST(Lp, FixedVariablesAreSubstituted) {
  LpProblem p;
  int x = p.add_variable(Rational(2), Rational(2), 1);
  int y = p.add_variable(Rational(0), Rational(5), 1);
  p.add_constraint({{x, 1}, {y, 1}}, Relation::ge, 3);
  auto s = solve(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_EQ(s.values[x], Rational(2));
  EXPECT_EQ(s.values[y], Rational(1));
}

TEST(Lp, RedundantEqualitiesAreDropped) {
  LpProblem p;
  int x = p.add_variable(Rational(0), std::nullopt, 1);
  int y = p.add_variable(Rational(0), std::nullopt, 2);
  p.add_constraint({{x, 1}, {y, 1}}, Relation::eq, 4);
  p.add_constraint({{x, 2}, {y, 2}}, Relation::eq, 8);
  auto s = solve(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_EQ(s.objective, Rational(4));
}

TEST(Lp, DegenerateCyclingExampleTerminates) {
  // Beale's example; cycles under textbook Dantzig pricing without safeguards.
  LpProblem p;
  int x1 = p.add_variable(Rational(0), std::nullopt, Rational(-3, 4));
  int x2 = p.add_variable(Rational(0), std::nullopt, Rational(150));
  int x3 = p.add_variable(Rational(0), std::nullopt, Rational(-1, 50));
  int x4 = p.add_variable(Rational(0), std::nullopt, Rational(6));
  p.add_constraint({{x1, Rational(1, 4)}, {x2, -60}, {x3, Rational(-1, 25)}, {x4, 9}}, Relation::le, 0);
  p.add_constraint({{x1, Rational(1, 2)}, {x2, -90}, {x3, Rational(-1, 50)}, {x4, 3}}, Relation::le, 0);
  p.add_constraint({{x3, 1}}, Relation::le, 1);
  auto s = solve(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_EQ(s.objective, Rational(-1, 20));
}

TEST(Lp, SolutionsSatisfyConstraintsExactlyAndMatchVertexEnumeration) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> nv(1, 5), nc(1, 5), coef(-4, 4), hi(1, 6), rel(0, 2), lo(-3, 1);
  int optimal = 0, infeasible = 0;
  for (int it = 0; it < 300; ++it) {
    LpProblem p(it % 2 ? Sense::maximize : Sense::minimize);
    int n = nv(rng);
    for (int j = 0; j < n; ++j) {
      int l = lo(rng);
      p.add_variable(Rational(l), Rational(l + hi(rng)), Rational(coef(rng), 1 + (it % 3)));
    }
    int m = nc(rng);
    for (int i = 0; i < m; ++i) {
      std::vector<Term> row;
      for (int j = 0; j < n; ++j)
        if (int c = coef(rng)) row.push_back({j, c});
      p.add_constraint(row, static_cast<Relation>(rel(rng)), Rational(coef(rng) * 2, 1 + i % 2));
    }
    auto s = solve(p);
    auto ref = oracle::vertex_enumeration(p);
    if (!ref.feasible) {
      EXPECT_EQ(s.status, LpStatus::infeasible) << "iteration " << it;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(s.status, LpStatus::optimal) << "iteration " << it;
    EXPECT_TRUE(p.feasible(s.values));
    EXPECT_EQ(s.objective, ref.value) << "iteration " << it;
    EXPECT_EQ(s.objective, p.objective_value(s.values));
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 10);
}

TEST(Lp, SeparationWithEmptyOracleEqualsPlainSolve) {
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), Rational(3), 2);
  int y = p.add_variable(Rational(0), Rational(3), 3);
  p.add_constraint({{x, 1}, {y, 1}}, Relation::le, 4);
  LpProblem q = p;
  auto a = solve(p);
  auto b = solve_with_separation(q, nullptr);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.values, b.values);
  SeparationOracle never = [](const std::vector<Rational>&) { return std::optional<Constraint>{}; };
  auto c = solve_with_separation(q, never);
  EXPECT_EQ(a.values, c.values);
}

TEST(Lp, SeparationAddsViolatedRowsUntilSatisfied) {
  // max x + y in [0,10]^2 with the implicit family x + y <= 10 - j/... here
  // the family is {x <= 3, y <= 4}, revealed one row at a time.
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), Rational(10), 1);
  int y = p.add_variable(Rational(0), Rational(10), 1);
  SeparationOracle o = [&](const std::vector<Rational>& v) -> std::optional<Constraint> {
    if (v[x] > Rational(3)) return Constraint{{{x, 1}}, Relation::le, 3};
    if (v[y] > Rational(4)) return Constraint{{{y, 1}}, Relation::le, 4};
    return std::nullopt;
  };
  auto s = solve_with_separation(p, o);
  EXPECT_EQ(s.objective, Rational(7));
  EXPECT_EQ(p.num_constraints(), 2);
}

TEST(Lp, SeparationBudgetCarriesLastCandidate) {
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), Rational(100), 1);
  SeparationOracle o = [&](const std::vector<Rational>& v) -> std::optional<Constraint> {
    return Constraint{{{x, 1}}, Relation::le, v[x] - 1};
  };
  try {
    solve_with_separation(p, o, 5);
    FAIL() << "expected budget error";
  } catch (const SeparationBudgetExceeded& e) {
    EXPECT_EQ(e.last.values[x], Rational(96));
  }
}

TEST(Lp, OracleMustReturnViolatedRow) {
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), Rational(1), 1);
  SeparationOracle o = [&](const std::vector<Rational>&) -> std::optional<Constraint> {
    return Constraint{{{x, 1}}, Relation::le, 5};
  };
  EXPECT_THROW(solve_with_separation(p, o), std::logic_error);
}

TEST(Lp, IsIntegral) {
  LpSolution s;
  s.values = {Rational(1), Rational(0), Rational(1)};
  EXPECT_TRUE(is_integral(s, {0, 1, 2}));
  s.values = {Rational(1, 2), Rational(1)};
  EXPECT_FALSE(is_integral(s, {0, 1}));
  EXPECT_TRUE(is_integral(s, {1}));
}

TEST(Lp, UniquenessOnOptimalFace) {
  // max x + y, x + y <= 1: face is a segment, so (1,0) is not unique.
  LpProblem p(Sense::maximize);
  int x = p.add_variable(Rational(0), Rational(1), 1);
  int y = p.add_variable(Rational(0), Rational(1), 1);
  p.add_constraint({{x, 1}, {y, 1}}, Relation::le, 1);
  auto s = solve(p);
  EXPECT_FALSE(unique_on_vars(p, s, {x, y}));
  // max 2x + y: unique at (1,0).
  p.set_objective(x, 2);
  s = solve(p);
  EXPECT_TRUE(unique_on_vars(p, s, {x, y}));
}

TEST(Lp, TableauDumpFormat) {
  LpProblem p;
  int x = p.add_variable(Rational(0), std::nullopt, 1);
  p.add_constraint({{x, 1}}, Relation::ge, 2);
  std::ostringstream os;
  SolveOptions o;
  o.tableau_dump = &os;
  auto s = solve(p, o);
  EXPECT_EQ(s.objective, Rational(2));
  EXPECT_EQ(os.str().rfind("tableau rows=1 cols=3 artificial_from=2\nbasis: 0\nr0: 1 -1 1 | 2\n", 0), 0u) << os.str();
}

TEST(Lp, LazyRowsGiveTheSameOptimum) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(-4, 6), rhs(1, 12);
  for (int it = 0; it < 60; ++it) {
    LpProblem p(it % 2 ? Sense::maximize : Sense::minimize);
    const int n = 3 + it % 4;
    for (int j = 0; j < n; ++j) p.add_variable(Rational(0), Rational(rhs(rng)), Rational(coef(rng)));
    for (int r = 0; r < 25; ++r) {
      std::vector<Term> t;
      for (int j = 0; j < n; ++j) t.push_back({j, Rational(coef(rng))});
      p.add_constraint(t, r % 5 == 0 ? Relation::ge : Relation::le, Rational(rhs(rng) - (r % 5 == 0 ? 12 : 0)));
    }
    auto full = solve(p);
    auto lazy = solve_lazy(p, 3);
    ASSERT_EQ(full.status, lazy.status);
    if (full.status == LpStatus::optimal) {
      EXPECT_EQ(full.objective, lazy.objective);
      EXPECT_TRUE(p.feasible(lazy.values));
    }
  }
}
