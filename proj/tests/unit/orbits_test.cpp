#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/linalg.hpp"
#include "ruelle/models.hpp"
#include "ruelle/orbits.hpp"

namespace ruelle {
namespace {

const IntMatrix2 kCat{2, 1, 1, 1};

TEST(Lyndon, ShortWords) {
  EXPECT_EQ(lyndon_words(1), (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(lyndon_words(3), (std::vector<std::string>{"0", "1", "01", "001", "011"}));
  const auto four = lyndon_words(4);
  EXPECT_EQ(std::count_if(four.begin(), four.end(), [](const auto& w) { return w.size() == 4; }), 3);
}

TEST(Lyndon, CountsMatchNecklaceFormula) {
  const auto counts = lyndon_counts(20);
  ASSERT_EQ(counts.size(), 21u);
  for (int n = 1; n <= 20; ++n) EXPECT_EQ(counts[n], testing::necklace_count(n)) << n;
  EXPECT_EQ(counts[20], 52377);
}

TEST(Lyndon, WordsAreMinimalAperiodicRotations) {
  for (const auto& w : lyndon_words(10)) {
    for (std::size_t r = 1; r < w.size(); ++r) {
      const std::string rot = w.substr(r) + w.substr(0, r);
      EXPECT_LT(w, rot) << w;
    }
  }
}

TEST(Lyndon, RejectsBadLengths) {
  EXPECT_THROW(lyndon_words(0), DomainError);
  EXPECT_THROW(lyndon_counts(kMaxSymbolLength + 1), DomainError);
}

TEST(Moebius, MatchesNaiveFactorisation) {
  for (int n = 1; n <= 200; ++n) EXPECT_EQ(moebius(n), testing::mobius_naive(n)) << n;
  EXPECT_THROW(moebius(0), DomainError);
}

TEST(CatFixedPoints, SmallCounts) {
  EXPECT_EQ(cat_fixed_points(kCat, 1).size(), 1u);
  EXPECT_EQ(cat_fixed_points(kCat, 2).size(), 5u);
  EXPECT_EQ(cat_fixed_points(kCat, 3).size(), 16u);
  EXPECT_EQ(cat_fixed_points(kCat, 1).front(), (TorusPoint{0, 0, 1}));
}

TEST(CatFixedPoints, MatchBruteForceLatticeScan) {
  for (const IntMatrix2& a : {kCat, IntMatrix2{3, 1, 2, 1}, IntMatrix2{1, 1, 1, 2}}) {
    for (int n = 1; n <= 6; ++n) {
      const auto an = a.pow(n);
      const auto points = cat_fixed_points(a, n);
      EXPECT_EQ(static_cast<std::int64_t>(points.size()),
                testing::brute_force_fixed_points(an.a, an.b, an.c, an.d));
      for (const auto& x : points) {
        TorusPoint y = x;
        for (int k = 0; k < n; ++k) y = apply_mod1(a, y);
        EXPECT_EQ(y, x);
      }
    }
  }
}

TEST(CatFixedPoints, CountEqualsDeterminantUpToTwelve) {
  for (int n = 1; n <= 12; ++n) {
    const auto an = kCat.pow(n);
    const std::int64_t det = std::llabs((an.a - 1) * (an.d - 1) - an.b * an.c);
    EXPECT_EQ(cat_fixed_point_count(kCat, n), det);
  }
  EXPECT_EQ(cat_fixed_points(kCat, 9).size(), static_cast<std::size_t>(cat_fixed_point_count(kCat, 9)));
}

TEST(CatCycles, DivisorSumRecoversFixedPoints) {
  for (int n = 1; n <= 8; ++n) {
    std::int64_t total = 0;
    for (int d = 1; d <= n; ++d) {
      if (n % d == 0) total += d * static_cast<std::int64_t>(cat_cycles(kCat, d).size());
    }
    EXPECT_EQ(total, cat_fixed_point_count(kCat, n)) << n;
  }
}

TEST(CatCycles, LabelsRoundTrip) {
  for (const auto& c : cat_cycles(kCat, 4)) {
    const auto pts = parse_cat_label(c.label);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(apply_mod1(kCat, pts[3]), pts[0]);
    EXPECT_EQ(*std::min_element(pts.begin(), pts.end()), pts[0]);
  }
}

TEST(GroupIntoCycles, SmallPermutations) {
  const std::vector<int> three{0, 1, 2};
  const auto c3 = group_into_cycles<int>(three, [](int x) { return (x + 1) % 3; }, 3);
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0], (std::vector<int>{0, 1, 2}));

  // Fixed points 0 and 3 have period 1, so only {1, 2} survives for n = 2.
  const std::vector<int> four{0, 1, 2, 3};
  const auto c2 = group_into_cycles<int>(four, [](int x) { return x == 1 ? 2 : x == 2 ? 1 : x; }, 2);
  ASSERT_EQ(c2.size(), 1u);
  EXPECT_EQ(c2[0], (std::vector<int>{1, 2}));

  const auto drift = [](int x) { return x + 1; };
  EXPECT_THROW(group_into_cycles<int>(three, drift, 3), DomainError);
  EXPECT_THROW(group_into_cycles<int>(three, drift, 0), DomainError);
}

TEST(PoincareOfCycle, HorseshoeIsDiagonalPower) {
  const auto m = horseshoe_suspension(3.0, 0.25);
  for (const auto& c : m.enumerate_cycles(5.0)) {
    const Matrix p = poincare_of_cycle(m, c);
    EXPECT_NEAR(p(0, 0), std::pow(3.0, -c.length), 1e-15);
    EXPECT_NEAR(p(1, 1), std::pow(4.0, c.length), 1e-9);
    EXPECT_NEAR(std::abs(p(0, 1)) + std::abs(p(1, 0)), 0.0, 1e-15);
  }
}

TEST(PoincareOfCycle, CatRotationsAreConjugate) {
  const auto m = cat_suspension(kCat);
  for (const auto& c : m.enumerate_cycles(4.0)) {
    const Matrix p0 = poincare_of_cycle(m, c, 0);
    EXPECT_NEAR((p0 - c.primitive_poincare).norm(), 0.0, 1e-9 * p0.norm());
    for (int s = 1; s < c.length; ++s) {
      const Matrix ps = poincare_of_cycle(m, c, s);
      EXPECT_NEAR(ps.trace(), p0.trace(), 1e-9 * std::abs(p0.trace()));
      EXPECT_NEAR(ps.determinant(), p0.determinant(), 1e-9);
    }
  }
}

TEST(PoincareOfCycle, CatTraceIsTraceOfPower) {
  const auto m = cat_suspension(kCat);
  for (const auto& c : m.enumerate_cycles(5.0)) {
    const auto an = kCat.pow(c.length);
    EXPECT_NEAR(c.primitive_poincare.trace(), static_cast<double>(an.trace()), 1e-9);
  }
}

TEST(CountOrbits, SmallValues) {
  const auto hs = count_orbits(horseshoe_suspension(3.0, 0.25), 3.0);
  ASSERT_EQ(hs.entries.size(), 3u);
  EXPECT_EQ(hs.entries[0].count, 2);
  EXPECT_EQ(hs.entries[1].count, 5);
  EXPECT_EQ(hs.entries[2].count, 9);

  EXPECT_EQ(count_orbits(cat_suspension(kCat), 2.0).entries.back().count, 4);

  const auto basic = count_orbits(basic_example(), 13.0);
  ASSERT_EQ(basic.entries.size(), 2u);
  EXPECT_EQ(basic.entries.back().count, 2);
  EXPECT_TRUE(count_orbits(basic_example(), 6.0).entries.empty());
  EXPECT_THROW(count_orbits(basic_example(), 0.0), DomainError);
}

TEST(CountOrbits, GrowthRatesNearTopologicalEntropy) {
  const double hs = count_orbits(horseshoe_suspension(3.0, 0.25), 20.0).growth_rate;
  EXPECT_NEAR(hs / std::log(2.0), 1.0, 0.05);
  const double cat = count_orbits(cat_suspension(kCat), 20.0).growth_rate;
  EXPECT_NEAR(cat / std::log((3.0 + std::sqrt(5.0)) / 2.0), 1.0, 0.05);
}

TEST(CountOrbits, TooLongThrows) {
  EXPECT_THROW(count_orbits(horseshoe_suspension(3.0, 0.25), kMaxSymbolLength + 1.0), EnumerationLimit);
}

}  // namespace
}  // namespace ruelle
