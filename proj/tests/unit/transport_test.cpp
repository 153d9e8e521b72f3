#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ruelle/errors.hpp"
#include "ruelle/models.hpp"
#include "ruelle/transport.hpp"

namespace ruelle {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rho_basic(const Point& x) { return 1.0 - x[0] * x[0] - x[1] * x[1]; }

// Forward exit of the basic example from the quadratic x1^2 u + x2^2 / u = 1,
// u = e^{2t}, solved independently of the library.
double basic_forward_exit(double x1, double x2) {
  const double a = x1 * x1, b = x2 * x2;
  const double u = (1.0 + std::sqrt(1.0 - 4.0 * a * b)) / (2.0 * a);
  return 0.5 * std::log(u);
}

TEST(Flow, BasicAndCatExamples) {
  const auto basic = basic_example();
  const Point y = flow(basic, {0.5, 0.5, 0.0}, std::log(2.0));
  EXPECT_NEAR(y[0], 1.0, 1e-15);
  EXPECT_NEAR(y[1], 0.25, 1e-15);
  const auto cat = cat_suspension({2, 1, 1, 1});
  const Point z = flow(cat, {0.25, 0.5, 0.5}, 1.0);
  EXPECT_NEAR(z[0], 0.0, 1e-15);
  EXPECT_NEAR(z[1], 0.75, 1e-15);
  EXPECT_NEAR(z[2], 0.5, 1e-15);
}

TEST(EscapeTime, BasicClosedFormExample) {
  const auto m = basic_example();
  const auto e = escape_time(m, {0.5, 0.5, 0.0});
  ASSERT_TRUE(e.forward_time && e.backward_time);
  EXPECT_NEAR(*e.forward_time, basic_forward_exit(0.5, 0.5), 1e-13);
  EXPECT_NEAR(*e.forward_time, 0.658478948462, 1e-11);
  EXPECT_NEAR(*e.backward_time, -*e.forward_time, 1e-13);
  EXPECT_NEAR(rho_basic(*e.exit_point), 0.0, 1e-12);
  EXPECT_NEAR(rho_basic(*e.entry_point), 0.0, 1e-12);
}

TEST(EscapeTime, TailsAreTrapped) {
  const auto m = basic_example();
  const auto on_stable = escape_time(m, {0.0, 0.6, 1.0});
  EXPECT_FALSE(on_stable.forward_time.has_value());
  EXPECT_TRUE(on_stable.backward_time.has_value());
  const auto on_k = escape_time(m, {0.0, 0.0, 2.0});
  EXPECT_FALSE(on_k.forward_time || on_k.backward_time);
  EXPECT_THROW(escape_time(m, {2.0, 0.0, 0.0}), DomainError);
}

TEST(EscapeTime, ClosedFormMatchesBisection) {
  const auto m = basic_example();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.0, kTwoPi);
  int checked = 0;
  while (checked < 1000) {
    const Point x{u(rng), u(rng), s(rng)};
    if (rho_basic(x) <= 0.0) continue;
    const auto closed = escape_time(m, x);
    const auto bis = escape_time_bisection(m, x);
    ASSERT_EQ(closed.forward_time.has_value(), bis.forward_time.has_value());
    ASSERT_EQ(closed.backward_time.has_value(), bis.backward_time.has_value());
    EXPECT_NEAR(*closed.forward_time, *bis.forward_time, 1e-9);
    EXPECT_NEAR(*closed.backward_time, *bis.backward_time, 1e-9);
    ++checked;
  }
}

TEST(EscapeTime, ConsistentAlongTrajectories) {
  const auto m = basic_example();
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-0.6, 0.6), frac(0.05, 0.95);
  for (int k = 0; k < 200; ++k) {
    const Point x{u(rng), u(rng), 1.0};
    const auto e = escape_time(m, x);
    const double s = frac(rng) * *e.forward_time;
    const auto later = escape_time(m, flow(m, x, s));
    EXPECT_NEAR(*later.forward_time, *e.forward_time - s, 1e-12);
    EXPECT_NEAR(*later.backward_time, *e.backward_time - s, 1e-12);
  }
}

TEST(EscapeTime, TrajectoriesLeaveOnceOnly) {
  // Strict convexity: rho along a trajectory is concave in time near the
  // boundary, so after the exit it never returns to positive values.
  const auto m = basic_example();
  const Point x{0.3, 0.7, 0.0};
  const auto e = escape_time(m, x);
  for (double dt = 0.01; dt < 3.0; dt += 0.01) {
    EXPECT_LT(rho_basic(flow(m, x, *e.forward_time + dt)), 0.0);
  }
}

TEST(EscapeTime, SuspensionsEscapeAtRoofCrossings) {
  const auto hs = horseshoe_suspension(3.0, 0.25);
  // One step maps x to 0.5, in the gap between the two strips.
  const auto e = escape_time(hs, {0.05 + 0.5 / 3.0, 0.5, 0.5});
  ASSERT_TRUE(e.forward_time.has_value());
  EXPECT_NEAR(*e.forward_time, 0.5, 1e-12);
  const auto cat = escape_time(cat_suspension({2, 1, 1, 1}), {0.1, 0.2, 0.3});
  EXPECT_FALSE(cat.forward_time || cat.backward_time);
}

TEST(BuiltinFunction, BumpShape) {
  const auto m = basic_example();
  const auto f = builtin_function(m, "bump");
  EXPECT_NEAR(std::abs(f.value({0.0, 0.0, 1.0}) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(f.value({0.8, 0.0, 1.0}), Complex(0.0));
  const auto fk = builtin_function(m, "bump-k2");
  EXPECT_NEAR(std::abs(fk.value({0.0, 0.0, 0.5}) - std::polar(1.0, 1.0)), 0.0, 1e-15);
  EXPECT_THROW(builtin_function(m, "wave"), DomainError);
}

TEST(Resolvent, ZeroFunctionGivesZero) {
  const auto m = basic_example();
  const TestFunction zero{"zero", [](const Point&) { return Complex(0.0); }, 0.0};
  const auto r = resolvent_apply(m, zero, 1.0, {0.2, 0.1, 0.0});
  EXPECT_EQ(r.value, Complex(0.0));
}

TEST(Resolvent, ExactValueOnTrappedSet) {
  const auto m = basic_example();
  for (int k : {0, 1, 3}) {
    const auto f = builtin_function(m, k == 0 ? "bump" : "bump-k" + std::to_string(k));
    const Complex lambda(1.0, 0.0);
    const auto r = resolvent_apply(m, f, lambda, {0.0, 0.0, 0.0});
    const Complex exact = 1.0 / (lambda + Complex(0.0, k));
    EXPECT_LT(std::abs(r.value - exact), 1e-8) << k;
    EXPECT_LT(r.error, 1e-8);
  }
}

TEST(Resolvent, IsLinear) {
  const auto m = basic_example();
  const auto f = builtin_function(m, "bump");
  const auto g = builtin_function(m, "bump-k1");
  const Complex a(0.5, -2.0), b(1.5, 0.25);
  const TestFunction h{"combo", [&](const Point& x) { return a * f.value(x) + b * g.value(x); }, 3.0};
  const Point x{0.1, 0.3, 0.7};
  const Complex lambda(0.8, 0.4);
  const Complex lhs = resolvent_apply(m, h, lambda, x).value;
  const Complex rhs = a * resolvent_apply(m, f, lambda, x).value + b * resolvent_apply(m, g, lambda, x).value;
  EXPECT_LT(std::abs(lhs - rhs), 1e-13);
}

TEST(Resolvent, InvertsTheGenerator) {
  // g = rho^2 e^{i x3} vanishes on the boundary, so R (X + lambda) g = g exactly.
  const auto m = basic_example();
  const Complex lambda(1.0, 0.5);
  const TestFunction xg{"xg",
                        [lambda](const Point& x) {
                          const double r = rho_basic(x);
                          const double xr = 2.0 * x[1] * x[1] - 2.0 * x[0] * x[0];
                          return std::polar(1.0, x[2]) * (2.0 * r * xr + (lambda + Complex(0, 1)) * r * r);
                        },
                        6.0};
  for (const Point& x : {Point{0.3, 0.4, 1.0}, Point{-0.5, 0.2, 4.0}, Point{0.1, -0.7, 0.0}}) {
    const Complex g = std::polar(1.0, x[2]) * rho_basic(x) * rho_basic(x);
    EXPECT_LT(std::abs(resolvent_apply(m, xg, lambda, x).value - g), 1e-10);
  }
}

TEST(Resolvent, TrappedBackwardOrbitNeedsPositiveRealPart) {
  const auto m = basic_example();
  const auto f = builtin_function(m, "bump");
  EXPECT_THROW(resolvent_apply(m, f, {-0.5, 0.0}, {0.1, 0.0, 0.0}), DomainError);
  // An orbit that enters U in finite backward time is fine for any lambda.
  EXPECT_NO_THROW(resolvent_apply(m, f, {-0.5, 0.0}, {0.1, 0.2, 0.0}));
}

TEST(PdeResidual, ZeroFunctionAndSecondOrder) {
  const auto m = basic_example();
  const auto samples = default_residual_samples(m);
  ASSERT_FALSE(samples.empty());
  const TestFunction zero{"zero", [](const Point&) { return Complex(0.0); }, 0.0};
  EXPECT_EQ(pde_residual(m, 1.0, zero, 0.01, samples), 0.0);
  const auto f = builtin_function(m, "bump");
  const double coarse = pde_residual(m, 1.0, f, 0.02, samples);
  const double fine = pde_residual(m, 1.0, f, 0.01, samples);
  EXPECT_GT(coarse, 0.0);
  EXPECT_NEAR(coarse / fine, 4.0, 0.8);
}

ModelDescriptor degenerate_field() {
  // Vertical field on the basic cylinder: every boundary point glances with X^2 rho = 0.
  ModelDescriptor m = basic_example();
  m.name = "vertical";
  m.vector_field = [](const Point&) { return Point{0.0, 0.0, 1.0}; };
  m.flow = [](const Point& x, double t) { return Point{x[0], x[1], x[2] + t}; };
  m.rho_x = [](const Point&) { return 0.0; };
  m.rho_xx = [](const Point&) { return 0.0; };
  return m;
}

TEST(Convexity, BasicExamplePasses) {
  const auto r = check_convexity(basic_example(), 100);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.pass) << r.message;
  EXPECT_GT(r.glancing_samples, 0);
  EXPECT_NEAR(r.max_second_derivative, -4.0, 1e-12);
  const auto finer = check_convexity(basic_example(), 200);
  EXPECT_TRUE(finer.pass);
  EXPECT_GE(finer.glancing_samples, r.glancing_samples);
}

TEST(Convexity, DegenerateFieldFails) {
  const auto r = check_convexity(degenerate_field(), 100);
  EXPECT_TRUE(r.applicable);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.max_second_derivative, 0.0);
}

TEST(Convexity, SuspensionsAreNotApplicable) {
  const auto r = check_convexity(cat_suspension({2, 1, 1, 1}), 50);
  EXPECT_FALSE(r.applicable);
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(check_convexity(basic_example(), 1), DomainError);
}

TEST(Cones, CatAndHorseshoePass) {
  for (const auto& m : {cat_suspension({2, 1, 1, 1}), horseshoe_suspension(3.0, 0.25)}) {
    const auto opts = default_cone_options(m);
    const auto c = certify_cones(m, opts);
    EXPECT_TRUE(c.pass) << m.name << ": " << c.message;
    EXPECT_GE(c.min_expansion, opts.required_factor * (1.0 - 1e-12));
    EXPECT_LT(c.max_image_aperture, opts.aperture);
    EXPECT_GT(c.sample_count, 0);
  }
}

TEST(Cones, HorseshoeFactors) {
  const auto m = horseshoe_suspension(3.0, 0.25);
  const auto c = certify_cones(m, default_cone_options(m));
  // Two roof steps: unstable covectors grow by 4^2, stable ones by 3^2 backward.
  EXPECT_NEAR(c.t0, 2.0, 1e-12);
  EXPECT_NEAR(c.forward_min_expansion, 16.0, 1e-9);
  EXPECT_NEAR(c.backward_min_expansion, 9.0, 1e-9);
}

TEST(Cones, SwappedAxesFail) {
  const auto m = cat_suspension({2, 1, 1, 1});
  auto opts = default_cone_options(m);
  opts.swap_axes = true;
  EXPECT_FALSE(certify_cones(m, opts).pass);
}

TEST(TrappedSet, BasicMasksMatchExactTails) {
  const auto m = basic_example();
  const auto masks = trapped_set_approx(m, 101, 10.0);
  EXPECT_EQ(masks.nx, 101);
  EXPECT_LE(mask_hausdorff_distance(m, masks, TailSet::gamma_plus), 1e-3);
  EXPECT_LE(mask_hausdorff_distance(m, masks, TailSet::gamma_minus), 1e-3);
  EXPECT_LE(mask_hausdorff_distance(m, masks, TailSet::trapped), 1e-3);
  for (int j = 0; j < masks.ny; ++j) {
    for (int i = 0; i < masks.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * masks.nx + i;
      EXPECT_EQ(masks.trapped[idx], masks.gamma_plus[idx] && masks.gamma_minus[idx]);
    }
  }
}

TEST(TrappedSet, CatIsEntirelyTrapped) {
  const auto masks = trapped_set_approx(cat_suspension({2, 1, 1, 1}), 21, 5.0);
  for (bool b : masks.trapped) EXPECT_TRUE(b);
}

TEST(TrappedSet, MasksShrinkWithTime) {
  const auto m = horseshoe_suspension(3.0, 0.25);
  const auto early = trapped_set_approx(m, 81, 2.0);
  const auto late = trapped_set_approx(m, 81, 4.0);
  for (std::size_t k = 0; k < late.gamma_plus.size(); ++k) {
    EXPECT_TRUE(!late.gamma_plus[k] || early.gamma_plus[k]);
    EXPECT_TRUE(!late.gamma_minus[k] || early.gamma_minus[k]);
  }
  EXPECT_THROW(mask_hausdorff_distance(m, late, TailSet::trapped), DomainError);
}

TEST(TrappedSet, FinerGridsResolveTheLineBetter) {
  const auto m = basic_example();
  const auto a = trapped_set_approx(m, 101, 5.0);
  const auto b = trapped_set_approx(m, 101, 10.0);
  EXPECT_GE(mask_hausdorff_distance(m, a, TailSet::gamma_plus),
            mask_hausdorff_distance(m, b, TailSet::gamma_plus));
}

}  // namespace
}  // namespace ruelle
