#include <gtest/gtest.h>

#include <random>

#include "stablecut/rational.hpp"

using stablecut::ExtRational;
using stablecut::Rational;

TEST(Rational, ReducesOnConstruction) {
  Rational r(6, 8);
  EXPECT_EQ(r.str(), "3/4");
  EXPECT_EQ(Rational(-6, -8).str(), "3/4");
  EXPECT_EQ(Rational(6, -8).str(), "-3/4");
  EXPECT_EQ(Rational(4).str(), "4/1");
}

TEST(Rational, ParseAcceptsFractionsAndIntegers) {
  EXPECT_EQ(Rational::parse("19/10"), Rational(19, 10));
  EXPECT_EQ(Rational::parse("-2/4"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("+3/9"), Rational(1, 3));
}

TEST(Rational, ParseRejectsGarbage) {
  for (const char* s : {"", "1/0", "1.5", "a/2", "1/-2", "/3", "3/", "--1"})
    EXPECT_THROW(Rational::parse(s), std::invalid_argument) << s;
}

TEST(Rational, SumIsReduced) {
  EXPECT_EQ((Rational(1, 6) + Rational(1, 3)).str(), "1/2");
  EXPECT_EQ((Rational(1, 2) - Rational(1, 2)).str(), "0/1");
}

TEST(Rational, FieldLawsOnRandomValues) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  for (int it = 0; it < 500; ++it) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!b.is_zero()) {
      EXPECT_EQ((a / b) * b, a);
    }
    EXPECT_EQ(Rational::parse((a + b).str()), a + b);
  }
}

TEST(Rational, CeilAndPow) {
  EXPECT_EQ(stablecut::ceil(Rational(7, 2)), 4);
  EXPECT_EQ(stablecut::ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(stablecut::ceil(Rational(3)), 3);
  EXPECT_EQ(stablecut::pow(Rational(2, 3), 3), Rational(8, 27));
}

TEST(ExtRational, InfinityOrdersAboveEverything) {
  ExtRational inf = ExtRational::infinity();
  EXPECT_GT(inf, ExtRational(Rational(1000000)));
  EXPECT_EQ(inf, ExtRational::infinity());
  EXPECT_LT(ExtRational(Rational(1, 2)), ExtRational(Rational(2, 3)));
  EXPECT_EQ(stablecut::ratio(Rational(3), Rational(0)), inf);
  EXPECT_EQ(stablecut::ratio(Rational(3), Rational(2)), ExtRational(Rational(3, 2)));
  EXPECT_EQ(inf.str(), "inf");
}
