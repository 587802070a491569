#include <thread>

#include <boost/math/special_functions/erf.hpp>
#include <gtest/gtest.h>

#include "nestderiv/catalog.hpp"
#include "nestderiv/quadrature.hpp"

using namespace nestderiv;

namespace {

const std::vector<std::string> kAll{"log1p", "arctan", "hermite_like", "power_law(2)", "power_law(1/2)",
                                    "power_law(-3/2)", "steep_decay"};

std::vector<Real> sample_points(const ProblemInstance& inst) {
  std::vector<Real> xs;
  Real lo = inst.domain().lower ? to_real(*inst.domain().lower) + Real("0.05") : Real(-4);
  for (int i = 0; i < 20; ++i) xs.push_back(lo + Real(i) * Real("0.37"));
  return xs;
}

Real rel(const Real& a, const Real& b) { return bmp::abs(a - b) / (bmp::abs(b) + Real(1e-300)); }

}  // namespace

TEST(Catalog, ArctanValues) {
  auto inst = catalog_get("arctan");
  EXPECT_EQ(inst->f(Real(1)), 2);
  EXPECT_EQ(inst->omega(Real(1)), 1);
}

TEST(Catalog, Log1pValues) {
  auto inst = catalog_get("log1p");
  EXPECT_EQ(inst->f(Real(0)), 1);
  EXPECT_EQ(inst->h(Real(0)), 0);
}

TEST(Catalog, HermiteOmega) { EXPECT_EQ(catalog_get("hermite_like")->omega(Real(2)), 2); }

TEST(Catalog, UnknownNameListsInstances) {
  try {
    (void)catalog_get("sinh");
    FAIL();
  } catch (const UsageError& e) {
    std::string msg = e.what();
    for (const auto& name : catalog_names()) EXPECT_NE(msg.find(name), std::string::npos) << name;
  }
}

TEST(Catalog, RaySupportFlags) {
  EXPECT_TRUE(catalog_get("log1p")->supports_rays());
  EXPECT_TRUE(catalog_get("arctan")->supports_rays());
  EXPECT_TRUE(catalog_get("hermite_like")->supports_rays());
  EXPECT_TRUE(catalog_get("power_law(2)")->supports_rays());
  EXPECT_FALSE(catalog_get("steep_decay")->supports_rays());
}

TEST(Catalog, DomainsRejectOutside) {
  EXPECT_THROW(catalog_get("log1p")->f(Real(-1)), DomainError);
  EXPECT_THROW(catalog_get("power_law(2)")->omega(Real(0)), DomainError);
  EXPECT_THROW(catalog_get("steep_decay")->f(Real(-2)), DomainError);
  EXPECT_NO_THROW(catalog_get("arctan")->f(Real(-1e6)));
}

TEST(Catalog, TailParams) {
  EXPECT_EQ(omega_tail_params(*catalog_get("arctan")), std::make_pair(Rational(2), Rational(-1)));
  EXPECT_EQ(omega_tail_params(*catalog_get("log1p")), std::make_pair(Rational(1), Rational(-1)));
  EXPECT_EQ(omega_tail_params(*catalog_get("hermite_like")), std::make_pair(Rational(1), Rational(1)));
  EXPECT_EQ(omega_tail_params(*catalog_get("steep_decay")), std::make_pair(Rational(1), Rational(-2)));
  EXPECT_EQ(omega_tail_params(*catalog_get("power_law(3/2)")), std::make_pair(Rational(3, 2), Rational(-1)));
}

TEST(Catalog, CustomHasNoTail) {
  auto inst = custom_from_series(RationalSeries(0, {1, -1, 1}));
  EXPECT_FALSE(inst->supports_rays());
  try {
    (void)omega_tail_params(*inst);
    FAIL();
  } catch (const MathError& e) {
    EXPECT_STREQ(e.what(), "no tail model");
  }
}

TEST(CatalogInvariant, InverseDerivativeRelation) {
  for (const auto& name : kAll) {
    auto inst = catalog_get(name);
    if (!inst->supports_rays()) continue;
    for (const auto& x : sample_points(*inst)) {
      Real step = Real(1e-6) * (1 + bmp::abs(x));
      Real hp = (inst->h(x + step) - inst->h(x - step)) / (2 * step);
      ASSERT_LT(bmp::abs(hp * inst->f(x) - 1), Real(1e-8)) << name << " at " << x;
    }
  }
}

TEST(CatalogInvariant, OmegaConsistency) {
  for (const auto& name : kAll) {
    auto inst = catalog_get(name);
    for (const auto& x : sample_points(*inst)) {
      ASSERT_LT(bmp::abs(inst->omega(x) - inst->f1(x) / inst->f(x)), Real(1e-30)) << name << " at " << x;
    }
  }
}

TEST(CatalogInvariant, SecondDerivativeConsistency) {
  for (const auto& name : kAll) {
    auto inst = catalog_get(name);
    for (const auto& x : sample_points(*inst)) {
      Real step = Real(1e-20) * (1 + bmp::abs(x));
      Real fd = (inst->f1(x + step) - inst->f1(x - step)) / (2 * step);
      ASSERT_LT(rel(fd, inst->f2(x)), Real(1e-30)) << name << " at " << x;
    }
  }
}

TEST(CatalogInvariant, SeriesMatchesEvaluators) {
  const int order = 40;
  for (const auto& name : kAll) {
    auto inst = catalog_get(name);
    for (const char* x0s : {"1", "3/2", "4"}) {
      Real x0 = to_real(parse_rational(x0s));
      auto w = inst->omega_series(x0, order);
      auto f = inst->f_series(x0, order);
      for (const char* dxs : {"-0.1", "-0.03", "0.05", "0.1"}) {
        Real dx(dxs);
        ASSERT_LT(rel(evaluate(w, dx), inst->omega(x0 + dx)), Real(1e-25)) << name << " x0=" << x0s << " dx=" << dxs;
        ASSERT_LT(rel(evaluate(f, dx), inst->f(x0 + dx)), Real(1e-25)) << name << " x0=" << x0s << " dx=" << dxs;
      }
    }
  }
}

TEST(CatalogInvariant, RationalSeriesMatchesFloatSeries) {
  for (const auto& name : kAll) {
    auto inst = catalog_get(name);
    if (!inst->has_rational_series()) continue;
    auto exact = inst->omega_series(Rational(3, 2), 12);
    auto approx = inst->omega_series(Real("1.5"), 12);
    for (int k = 0; k <= 12; ++k) ASSERT_LT(rel(to_real(exact[k]), approx[k]), Real(1e-70)) << name << " k=" << k;
  }
}

TEST(CatalogInvariant, TailRatio) {
  for (const auto& name : kAll) {
    auto inst = catalog_get(name);
    auto [a, p] = omega_tail_params(*inst);
    Real prev = 1;
    for (double x : {1e3, 1e4}) {
      Real xr(x);
      Real dev = bmp::abs(inst->omega(xr) / (to_real(a) * bmp::pow(xr, to_real(p))) - 1);
      ASSERT_LT(dev, Real(1e-2)) << name << " x=" << x;
      ASSERT_LE(dev, prev) << name << " x=" << x;
      prev = dev;
    }
  }
}

TEST(CatalogCustom, GOneIsOmega) {
  auto inst = custom_from_series(RationalSeries(0, {1, -1, 1}));
  EXPECT_EQ(inst->omega_series(Rational(0), 2)[0], 1);
  EXPECT_EQ(inst->f_exact(Rational(0)), Rational(1));
  EXPECT_EQ(inst->f(Real(0)), 1);
}

TEST(CatalogCustom, OnlyAtCenter) {
  auto inst = custom_from_series(RationalSeries(Rational(1, 2), {1, 2}));
  EXPECT_THROW((void)inst->omega_series(Rational(0), 1), MathError);
  EXPECT_THROW((void)inst->omega_series(Rational(1, 2), 3), MathError);
  EXPECT_NO_THROW((void)inst->omega_series(Rational(1, 2), 1));
}

TEST(Hermite, MatchesErfOracle) {
  auto inst = catalog_get("hermite_like");
  const Real scale = bmp::sqrt(pi() / 2);
  for (const char* xs : {"-6", "-2.5", "-0.3", "0", "0.7", "2", "5", "9"}) {
    Real x(xs);
    Real expected = scale * boost::math::erf(x / bmp::sqrt(Real(2)));
    ASSERT_LT(bmp::abs(inst->h(x) - expected), Real(1e-30)) << xs;
  }
}

TEST(Hermite, TailDifferenceKeepsRelativeAccuracy) {
  auto inst = catalog_get("hermite_like");
  // h(9) - h(8) = sqrt(pi/2) (erfc(8/sqrt2) - erfc(9/sqrt2)), about 6e-16.
  const Real r2 = bmp::sqrt(Real(2));
  Real expected = bmp::sqrt(pi() / 2) * (boost::math::erfc(Real(8) / r2) - boost::math::erfc(Real(9) / r2));
  EXPECT_LT(rel(inst->h_diff(Real(9), Real(8)), expected), Real(1e-25));
}

TEST(Quadrature, PolynomialExact) {
  Real v = integrate_adaptive([](const Real& t) { return t * t * t - 2 * t; }, Real(-1), Real(3), Real(1e-40));
  EXPECT_LT(bmp::abs(v - Real(12)), Real(1e-60));
}

TEST(Quadrature, ConcurrentFillsAgree) {
  auto inst = catalog_get("hermite_like");
  std::vector<Real> xs;
  for (int i = 0; i < 24; ++i) xs.push_back(Real(i) * Real("0.61") - Real(7));
  std::vector<std::vector<Real>> results(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = 0; i < xs.size(); ++i) results[t].push_back(inst->h(xs[(i + 3 * t) % xs.size()]));
    });
  }
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ASSERT_EQ(results[t][i], inst->h(xs[(i + 3 * t) % xs.size()])) << "thread " << t << " item " << i;
    }
  }
}
