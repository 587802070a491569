#include <random>

#include <gtest/gtest.h>

#include "nestderiv/series.hpp"

using namespace nestderiv;

namespace {

RationalSeries rs(std::vector<Rational> c, Rational center = 0) { return RationalSeries(center, std::move(c)); }

RationalSeries random_series(std::mt19937_64& rng, int order, Rational center = 0) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int k = 0; k <= order; ++k) c.emplace_back(num(rng), den(rng));
  return rs(std::move(c), center);
}

void expect_coeffs(const RationalSeries& s, std::vector<Rational> expected) {
  ASSERT_EQ(s.order() + 1, static_cast<int>(expected.size()));
  for (int k = 0; k <= s.order(); ++k) EXPECT_EQ(s[k], expected[k]) << "coefficient " << k;
}

}  // namespace

TEST(SeriesArith, BinomialSquare) { expect_coeffs(rs({1, 1, 0}) * rs({1, 1, 0}), {1, 2, 1}); }

TEST(SeriesArith, AddCancels) { expect_coeffs(rs({1, 1}) + rs({1, -1}), {2, 0}); }

TEST(SeriesArith, ProductTruncatesTopTerm) { expect_coeffs(rs({1, 1, 1}) * rs({1, -1, 0}), {1, 0, 0}); }

TEST(SeriesArith, ResultOrderIsMinimum) {
  auto p = rs({1, 2, 3, 4}) * rs({1, 1});
  EXPECT_EQ(p.order(), 1);
  EXPECT_EQ((rs({1, 2, 3}) + rs({1})).order(), 0);
}

TEST(SeriesArith, Scale) { expect_coeffs(Rational(3) * rs({1, -2, 1}), {3, -6, 3}); }

TEST(SeriesArith, CenterMismatch) {
  try {
    (void)(rs({1, 1}, 0) * rs({1, 1}, 1));
    FAIL();
  } catch (const MathError& e) {
    EXPECT_STREQ(e.what(), "center mismatch");
  }
  EXPECT_THROW((void)(rs({1}, 0) + rs({1}, 2)), MathError);
}

TEST(SeriesCalculus, Differentiate) {
  expect_coeffs(differentiate(rs({1, 2, 3})), {2, 6});
  expect_coeffs(differentiate(rs({5})), {0});
}

TEST(SeriesCalculus, Integrate) {
  expect_coeffs(integrate(rs({1})), {0, 1});
  expect_coeffs(integrate(rs({1, 2}), Rational(7)), {7, 1, 1});
}

TEST(SeriesReciprocal, Geometric) { expect_coeffs(reciprocal(rs({1, 1, 0, 0})), {1, -1, 1, -1}); }

TEST(SeriesReciprocal, Unit) { expect_coeffs(reciprocal(rs({1})), {1}); }

TEST(SeriesReciprocal, ZeroConstantTerm) {
  try {
    (void)reciprocal(rs({0, 1}));
    FAIL();
  } catch (const MathError& e) {
    EXPECT_STREQ(e.what(), "non-invertible series");
  }
}

TEST(SeriesEvaluate, Horner) {
  EXPECT_EQ(evaluate(rs({1, 2}), Rational(1, 2)), 2);
  EXPECT_EQ(evaluate(rs({7, 3, 9}), Rational(0)), 7);
  EXPECT_EQ(evaluate(rs({1, -1, 1}), Rational(1)), 1);
}

TEST(SeriesRevert, ArctanToTan) {
  expect_coeffs(revert(rs({0, 1, 0, Rational(-1, 3), 0, Rational(1, 5)})), {0, 1, 0, Rational(1, 3), 0, Rational(2, 15)});
}

TEST(SeriesRevert, Identity) { expect_coeffs(revert(rs({0, 1, 0, 0})), {0, 1, 0, 0}); }

TEST(SeriesRevert, LogToExpm1) {
  expect_coeffs(revert(rs({0, 1, Rational(-1, 2), Rational(1, 3)})), {0, 1, Rational(1, 2), Rational(1, 6)});
}

TEST(SeriesRevert, ShiftedConstantTerm) {
  // y = 2 + 3(x - 1): inverse x = 1 + (y - 2)/3 about y = 2.
  auto inv = revert(rs({2, 3, 0}, 1));
  EXPECT_EQ(inv.center(), 2);
  expect_coeffs(inv, {1, Rational(1, 3), 0});
}

TEST(SeriesRevert, SingularLinearTerm) {
  try {
    (void)revert(rs({0, 0, 1}));
    FAIL();
  } catch (const MathError& e) {
    EXPECT_STREQ(e.what(), "non-invertible at center");
  }
}

TEST(SeriesExp, MatchesFactorials) {
  expect_coeffs(exp_series(rs({0, 1, 0, 0, 0})), {1, 1, Rational(1, 2), Rational(1, 6), Rational(1, 24)});
}

TEST(SeriesOrder, TruncatedRejectsGrowth) {
  try {
    (void)rs({1, 2}).truncated(3);
    FAIL();
  } catch (const MathError& e) {
    EXPECT_STREQ(e.what(), "insufficient series order");
  }
}

TEST(SeriesProperty, RingLaws) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 250; ++trial) {
    int order = 1 + trial % 7;
    auto a = random_series(rng, order), b = random_series(rng, order), c = random_series(rng, order);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ((a - a), RationalSeries::zero(0, order));
  }
}

TEST(SeriesProperty, ReciprocalRational) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 250; ++trial) {
    auto a = random_series(rng, 1 + trial % 8);
    if (a[0] == 0) continue;
    ASSERT_EQ(a * reciprocal(a), RationalSeries::constant(0, 1, a.order()));
  }
}

TEST(SeriesProperty, ReciprocalFloat) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  const Real tol = bmp::ldexp(Real(1), -200);
  for (int trial = 0; trial < 250; ++trial) {
    int order = 1 + trial % 10;
    std::vector<Real> c;
    for (int k = 0; k <= order; ++k) c.emplace_back(u(rng));
    c[0] = 1 + std::abs(u(rng));
    RealSeries a(Real(0), c);
    auto unit = a * reciprocal(a);
    ASSERT_LT(bmp::abs(unit[0] - 1), tol);
    for (int k = 1; k <= order; ++k) ASSERT_LT(bmp::abs(unit[k]), tol) << trial << ":" << k;
  }
}

TEST(SeriesProperty, RevertTwiceIsIdentity) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 220; ++trial) {
    auto a = random_series(rng, 1 + trial % 7);
    std::vector<Rational> c(a.coeffs().begin(), a.coeffs().end());
    c[0] = 0;
    c[1] = 1;
    RationalSeries s(0, c);
    ASSERT_EQ(revert(revert(s)), s);
  }
}

TEST(SeriesProperty, RevertComposesToIdentity) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    int order = 1 + trial % 6;
    auto a = random_series(rng, order);
    std::vector<Rational> c(a.coeffs().begin(), a.coeffs().end());
    c[0] = 0;
    if (c[1] == 0) c[1] = 2;
    RationalSeries s(0, c);
    auto inv = revert(s);
    // s(inv(z)) = z through order.
    auto comp = RationalSeries::zero(0, order);
    auto power = RationalSeries::constant(0, 1, order);
    auto inner = RationalSeries(0, std::vector<Rational>(inv.coeffs().begin(), inv.coeffs().end()));
    for (int k = 0; k <= order; ++k) {
      comp = comp + s[k] * power;
      power = power * inner;
    }
    ASSERT_EQ(comp, RationalSeries::variable(0, order));
  }
}

TEST(SeriesProperty, DifferentiateUndoesIntegrate) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 250; ++trial) {
    auto a = random_series(rng, trial % 9);
    ASSERT_EQ(differentiate(integrate(a)), a);
  }
}
