#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/models.hpp"
#include "ruelle/traces.hpp"

namespace ruelle {
namespace {

using testing::kTwoPi;

TEST(TraceSum, BasicAtZero) {
  const auto v = trace_sum(basic_example(), 0.0, 40.0);
  EXPECT_EQ(v.terms_used, 6);
  EXPECT_NEAR(v.value.real(), 0.0117994, 5e-8);
  EXPECT_LE(std::abs(v.value - testing::basic_series_cosh(0.0)), 1e-12 * std::abs(v.value));
  EXPECT_LT(v.tail_estimate, 1e-15);
}

TEST(TraceSum, BasicMatchesSeriesOnGrid) {
  const auto m = basic_example();
  for (double re = 0.0; re <= 2.0; re += 0.5) {
    for (double im = -2.0; im <= 2.0; im += 0.5) {
      const Complex z(re, im);
      const auto v = trace_sum(m, z, 40.0);
      const Complex ref = testing::basic_series_cosh(z);
      EXPECT_LE(std::abs(v.value - ref), 1e-12 * std::abs(ref)) << z;
    }
  }
}

TEST(TraceSum, CatAtOneWithinTail) {
  const auto v = trace_sum(cat_suspension({2, 1, 1, 1}), 1.0, 10.0);
  const double exact = 1.0 / (std::numbers::e - 1.0);
  EXPECT_TRUE(v.converged());
  EXPECT_LE(std::abs(v.value - exact), v.tail_estimate * (1.0 + 1e-6));
  // Each period block of the cat trace is exactly e^{-n lambda}.
  EXPECT_NEAR(v.abscissa_margin, 1.0, 1e-9);
}

TEST(TraceSum, HorseshoeWithinTail) {
  const auto m = horseshoe_suspension(3.0, 0.25);
  for (double re : {-0.25, 0.0, 0.5}) {
    const Complex z(re, 0.4);
    const auto v = trace_sum(m, z, 12.0);
    const Complex ref = testing::horseshoe_per_length(z, 3.0, 0.25);
    EXPECT_LE(std::abs(v.value - ref), v.tail_estimate) << z;
    EXPECT_NEAR(v.abscissa_margin, re + std::log(2.0), 0.01);
  }
}

TEST(TraceSum, DivergentRegionHasInfiniteTail) {
  const auto v = trace_sum(horseshoe_suspension(3.0, 0.25), -1.0, 10.0);
  EXPECT_FALSE(v.converged());
  EXPECT_LT(v.abscissa_margin, 0.0);
}

TEST(TraceSum, ConstantPotentialShiftsLambda) {
  const auto m = horseshoe_suspension(3.0, 0.25);
  const Complex c(0.3, -0.2), z(0.5, 1.0);
  const auto shifted = trace_sum(m, z, 8.0, 0, Potential::constant(c));
  const auto direct = trace_sum(m, z + c, 8.0);
  EXPECT_LE(std::abs(shifted.value - direct.value), 1e-14 * std::abs(direct.value));
}

TEST(TraceSum, DegreeTwoOfCatEqualsDegreeZero) {
  // det P = 1, so wedge^2 P contributes the same weights as wedge^0.
  const auto m = cat_suspension({2, 1, 1, 1});
  const auto f0 = trace_sum(m, 2.0, 8.0, 0);
  const auto f2 = trace_sum(m, 2.0, 8.0, 2);
  EXPECT_NEAR(std::abs(f0.value - f2.value), 0.0, 1e-12);
}

TEST(Zeta, CatProductAndLogDerivative) {
  const auto m = cat_suspension({2, 1, 1, 1});
  const double t = 10.0, h = 1e-4;
  const auto logzeta = [&](Complex z) { return std::log(zeta_product(m, z, t).value); };
  const Complex fd = testing::central_difference(logzeta, 3.0, h);
  const auto ld = zeta_log_derivative(m, 3.0, t, Potential::zero(), 1);
  EXPECT_LE(std::abs(ld.value - fd), 1e-6 * std::abs(fd));
}

TEST(Zeta, BasicProductAndLogDerivative) {
  const auto m = basic_example();
  const double t = 40.0, h = 1e-4;
  const auto z2 = zeta_product(m, 2.0, t);
  EXPECT_NEAR(z2.value.real(), 1.0 - std::exp(-2.0 * kTwoPi), 1e-15);
  const auto logzeta = [&](Complex z) { return std::log(zeta_product(m, z, t).value); };
  const Complex fd = testing::central_difference(logzeta, 2.0, h);
  const auto ld = zeta_log_derivative(m, 2.0, t, Potential::zero(), 1);
  EXPECT_LE(std::abs(ld.value - fd), 1e-6 * std::abs(fd));
}

TEST(ContinueBasic, MatchesSeriesInConvergentRegion) {
  for (double re : {-0.4, 0.0, 0.7, 2.0}) {
    for (double im : {-1.3, 0.0, 0.25, 2.0}) {
      const Complex z(re, im);
      const Complex ref = testing::basic_series_cosh(z, 40);
      EXPECT_LE(std::abs(continue_basic(z) - ref), 1e-12 * std::abs(ref)) << z;
    }
  }
}

TEST(ContinueBasic, FunctionalEquationAtRandomPoints) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(0.0, 3.0), im(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const Complex z(re(rng), im(rng));
    const Complex lhs = continue_basic(z + 1.0) + continue_basic(z - 1.0) - 2.0 * continue_basic(z);
    const Complex rhs = kTwoPi / (std::exp(kTwoPi * z) - 1.0);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(rhs)) << z;
  }
}

TEST(ContinueBasic, ResiduesAreRanks) {
  // Small-circle average of (z - p) F(z) approximates the residue.
  const auto res = [](Complex p) {
    Complex sum = 0.0;
    const int n = 64;
    const double r = 1e-3;
    for (int j = 0; j < n; ++j) {
      const Complex dz = std::polar(r, kTwoPi * j / n);
      sum += dz * continue_basic(p + dz);
    }
    return sum / static_cast<double>(n);
  };
  EXPECT_NEAR(std::abs(res({-1.0, 0.0}) - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(res({-3.0, 2.0}) - 3.0), 0.0, 1e-8);
}

TEST(ContinueBasic, PolesThrow) {
  EXPECT_THROW(continue_basic({-1.0, 0.0}), PoleError);
  EXPECT_THROW(continue_basic({-2.0, 1.0 + 1e-10}), PoleError);
  EXPECT_NO_THROW(continue_basic({-2.0, 1.0 + 1e-6}));
  // Guard 0: only the exact lattice points are refused.
  EXPECT_NO_THROW(continue_basic({-2.0, 1.0 + 1e-10}, 0.0));
  EXPECT_THROW(continue_basic({-2.0, 1.0}, 0.0), PoleError);
}

TEST(ContinueBasic, ConjugateSymmetric) {
  const Complex z(-2.3, 0.7);
  EXPECT_LE(std::abs(continue_basic(std::conj(z)) - std::conj(continue_basic(z))),
            1e-12 * std::abs(continue_basic(z)));
}

TEST(ContinueHorseshoe, MatchesPerLengthSeries) {
  const HorseshoeParams p{3.0, 0.25};
  for (double re : {-0.5, 0.0, 1.0}) {
    const Complex z(re, -0.8);
    const auto v = continue_horseshoe(z, 40, p);
    EXPECT_LE(std::abs(v.value - testing::horseshoe_per_length(z, 3.0, 0.25)), 1e-12) << z;
    EXPECT_LT(v.tail_estimate, 1e-12);
  }
}

TEST(ContinueHorseshoe, ZeroTruncationIsOneTerm) {
  const Complex z(0.5, 0.1);
  const auto v = continue_horseshoe(z, 0, {3.0, 0.25});
  const Complex w = 0.5 * std::exp(-z);
  EXPECT_EQ(v.terms_used, 1);
  EXPECT_LE(std::abs(v.value - w / (1.0 - w)), 1e-15);
  EXPECT_GT(v.tail_estimate, 0.0);
  EXPECT_THROW(continue_horseshoe(z, -1, {3.0, 0.25}), DomainError);
}

TEST(ContinueHorseshoe, TailBoundsTheTruncation) {
  const HorseshoeParams p{3.0, 0.25};
  const Complex z(-1.0, 0.3);
  const auto full = continue_horseshoe(z, 60, p);
  for (int j : {2, 5, 10}) {
    const auto v = continue_horseshoe(z, j, p);
    EXPECT_LE(std::abs(v.value - full.value), v.tail_estimate) << j;
  }
}

TEST(ContinueHorseshoe, LatticePoleThrows) {
  EXPECT_THROW(continue_horseshoe(-std::log(2.0), 40, {3.0, 0.25}), PoleError);
}

TEST(ContinueCat, ExamplesAndPeriodicity) {
  EXPECT_NEAR(continue_cat(std::log(2.0)).real(), 1.0, 1e-14);
  EXPECT_NEAR(continue_cat(1.0).real(), 0.5819767068693265, 1e-15);
  EXPECT_THROW(continue_cat({0.0, kTwoPi}), PoleError);
  const Complex z(-0.4, 1.1);
  EXPECT_LE(std::abs(continue_cat(z + Complex(0, kTwoPi)) - continue_cat(z)), 1e-14);
}

TEST(Continuation, AgreesWithTraceSumOnOverlap) {
  const auto basic = basic_example();
  const auto hs = horseshoe_suspension(3.0, 0.25);
  const auto fb = continuation(basic);
  const auto fh = continuation(hs);
  for (double re : {0.0, 0.5, 1.0}) {
    for (double im : {-1.0, 0.0, 1.5}) {
      const Complex z(re, im);
      const auto tb = trace_sum(basic, z, 40.0);
      EXPECT_LE(std::abs(fb(z) - tb.value), 1e-12 * std::abs(tb.value) + tb.tail_estimate);
      const auto th = trace_sum(hs, z, 14.0);
      EXPECT_LE(std::abs(fh(z) - th.value), th.tail_estimate + 1e-12) << z;
    }
  }
}

TEST(Continuation, AdditiveAcrossEnumerationCutoffs) {
  // F(T2) - F(T1) is exactly the weight of orbits with T1 < T <= T2.
  const auto m = horseshoe_suspension(3.0, 0.25);
  const Complex z(0.2, 0.3);
  const Complex a = trace_sum(m, z, 6.0).value;
  const Complex b = trace_sum(m, z, 7.0).value;
  const Complex block = std::pow(0.5 * std::exp(-z), 7) / ((1.0 - std::pow(3.0, -7)) * (1.0 - std::pow(0.25, 7)));
  EXPECT_LE(std::abs((b - a) - block), 1e-15);
}

}  // namespace
}  // namespace ruelle
