#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "mbe/bounds_lab.hpp"
#include "mbe/error.hpp"
#include "mbe/spectral.hpp"

using namespace mbe;
using mbe::testing::kTwoPi;
using mbe::testing::sample;

namespace {

double lgamma_beta(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

BihariProblem problem(Nonlinearity omega, double k, double M, double b) {
  BihariProblem p;
  p.k = k;
  p.M = M;
  p.h = TabulatedFunction::constant(0.0, b, 1.0);
  p.omega = omega;
  return p;
}

}  // namespace

// Beta integral

TEST(Beta, UnitIntegral) { EXPECT_NEAR(beta_integral_constant(0.0, 0.0), 1.0, 1e-14); }

TEST(Beta, HalfHalfIsPi) {
  boost::math::quadrature::tanh_sinh<double> ts;
  // Two-argument form: xc is the signed distance to the nearer endpoint.
  const double oracle = ts.integrate(
      [](double u, double xc) {
        const double left = xc < 0.0 ? -xc : u;
        const double right = xc > 0.0 ? xc : 1.0 - u;
        return 1.0 / std::sqrt(left * right);
      },
      0.0, 1.0);
  EXPECT_NEAR(oracle, std::numbers::pi, 1e-10);
  EXPECT_NEAR(beta_integral_constant(0.5, 0.5), oracle, 1e-8);
}

TEST(Beta, MatchesLogGamma) {
  EXPECT_NEAR(beta_integral_constant(0.5, 0.25), lgamma_beta(0.5, 0.75), 1e-8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int i = 0; i < 10; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const double c = beta_integral_constant(a, b);
    EXPECT_NEAR(c / lgamma_beta(1.0 - a, 1.0 - b), 1.0, 1e-8) << a << " " << b;
  }
}

TEST(Beta, Symmetric) {
  for (auto [a, b] : {std::pair{0.3, -0.2}, {0.7, 0.1}, {0.95, 0.5}}) {
    EXPECT_NEAR(beta_integral_constant(a, b), beta_integral_constant(b, a), 1e-10);
  }
}

TEST(Beta, ScalingCollapse) {
  const BetaReport r = beta_scaling_report(0.5, 0.25);
  EXPECT_LT(r.max_collapse_error, 1e-6);
  EXPECT_NEAR(r.fitted_exponent, r.expected_exponent, 1e-6);
  EXPECT_DOUBLE_EQ(r.expected_exponent, 0.25);
  EXPECT_NEAR(beta_t_integral(0.5, 0.25, 2.0), r.constant * std::pow(2.0, 0.25), 1e-8);
}

TEST(Beta, RejectsDivergent) {
  EXPECT_THROW(beta_integral_constant(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(beta_integral_constant(0.0, 1.5), InvalidArgument);
}

// Bihari

TEST(Bihari, GronwallClosedForm) {
  BihariProblem p = problem(Nonlinearity::identity(), 0.7, 1.3, 2.0);
  p.h = TabulatedFunction{{0.0, 0.5, 1.0, 2.0}, {1.0, 2.0, 0.5, 0.0}};
  for (double t : {0.0, 0.3, 0.75, 1.5, 2.0}) {
    const BihariBound b = bihari_bound(p, t);
    ASSERT_TRUE(b.in_domain);
    EXPECT_NEAR(b.value, 0.7 * std::exp(1.3 * p.h.integral_to(t)), 1e-8 * b.value);
  }
}

TEST(Bihari, ZeroMReturnsK) {
  const BihariProblem p = problem(Nonlinearity::power(2.0), 0.4, 0.0, 1.0);
  EXPECT_NEAR(bihari_bound(p, 0.8).value, 0.4, 1e-10);
}

TEST(Bihari, QuadraticBlowsUpAtOne) {
  const BihariProblem p = problem(Nonlinearity::power(2.0), 1.0, 1.0, 2.0);
  for (double t : {0.0, 0.25, 0.5, 0.9}) {
    const BihariBound b = bihari_bound(p, t);
    ASSERT_TRUE(b.in_domain) << t;
    EXPECT_NEAR(b.value, 1.0 / (1.0 - t), 1e-8 / (1.0 - t));
  }
  EXPECT_FALSE(bihari_bound(p, 1.0).in_domain);
  EXPECT_FALSE(bihari_bound(p, 1.5).in_domain);
  EXPECT_NEAR(bihari_domain_boundary(p), 1.0, 1e-8);
}

TEST(Bihari, MonotoneInParameters) {
  const BihariProblem base = problem(Nonlinearity::power(1.5), 0.5, 1.0, 1.0);
  double prev = 0.0;
  for (double t = 0.0; t <= 1.0; t += 0.1) {
    const double v = bihari_bound(base, t).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
  prev = 0.0;
  for (double k : {0.1, 0.2, 0.4, 0.8}) {
    BihariProblem p = base;
    p.k = k;
    const double v = bihari_bound(p, 0.5).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
  prev = 0.0;
  for (double M : {0.0, 0.5, 1.0, 2.0}) {
    BihariProblem p = base;
    p.M = M;
    const double v = bihari_bound(p, 0.5).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Bihari, VerifyHoldsAndIsTight) {
  const BihariProblem g = problem(Nonlinearity::identity(), 1.0, 1.0, 1.0);
  const BihariVerifyReport r = bihari_verify(g, 20, 42);
  EXPECT_LE(r.max_violation, 1e-8);
  EXPECT_LE(r.equality_violation, 1e-8);
  EXPECT_LE(r.equality_gap, 1e-8);
  EXPECT_GT(r.half_scaled_min_slack, 0.0);
  EXPECT_EQ(r.seeds.size(), 20u);

  const BihariProblem q = problem(Nonlinearity::power(2.0), 1.0, 1.0, 2.0);
  const BihariVerifyReport s = bihari_verify(q, 20, 42);
  EXPECT_LE(s.max_violation, 1e-8);
  EXPECT_LE(s.equality_violation, 1e-8);
  EXPECT_GT(s.half_scaled_min_slack, 0.0);
}

TEST(Bihari, VerifyIsReplayable) {
  const BihariProblem p = problem(Nonlinearity::power(1.5), 0.5, 1.0, 1.0);
  const BihariVerifyReport a = bihari_verify(p, 5, 9);
  const BihariVerifyReport b = bihari_verify(p, 5, 9);
  EXPECT_EQ(a.max_violation, b.max_violation);
  EXPECT_EQ(a.seeds, b.seeds);
}

TEST(Bihari, RejectsVanishingOmegaAndZeroK) {
  BihariProblem p = problem(Nonlinearity::tabulated(TabulatedFunction{{0.0, 10.0}, {0.0, 0.0}}), 1.0, 1.0, 1.0);
  EXPECT_THROW(bihari_bound(p, 0.5), InvalidArgument);
  BihariProblem z = problem(Nonlinearity::identity(), 0.0, 1.0, 1.0);
  EXPECT_THROW(bihari_bound(z, 0.5), InvalidArgument);
}

TEST(Bihari, SmallKStudyTendsToZero) {
  const BihariProblem p = problem(Nonlinearity::identity(), 1.0, 1.0, 1.0);
  const auto rows = bihari_small_k_study(p, 1.0, {1e-2, 1e-4, 1e-6});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& [k, v] : rows) EXPECT_NEAR(v, k * std::numbers::e, 1e-8 * std::max(v, 1e-12));
  EXPECT_LT(rows.back().second, rows.front().second);
}

TEST(Bihari, RejectsDecreasingTable) {
  EXPECT_THROW(Nonlinearity::tabulated(TabulatedFunction{{0.0, 1.0}, {2.0, 1.0}}).validate(),
               InvalidArgument);
}

// Strauss

TEST(Strauss, Examples) {
  const StraussResult a = strauss_check({0.1, 1.0, 2.0});
  EXPECT_TRUE(a.condition_holds);
  EXPECT_DOUBLE_EQ(a.rhs, 0.25);
  EXPECT_DOUBLE_EQ(a.bound, 0.2);
  EXPECT_FALSE(strauss_check({0.3, 1.0, 2.0}).condition_holds);

  const FixedPointResult f = strauss_fixed_point({0.1, 1.0, 2.0});
  ASSERT_TRUE(f.converged);
  EXPECT_NEAR(f.limit, (1.0 - std::sqrt(1.0 - 0.4)) / 2.0, 1e-12);
  EXPECT_LT(f.limit, 0.2);
  EXPECT_FALSE(strauss_fixed_point({0.3, 1.0, 2.0}).converged);
}

TEST(Strauss, RescalingInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const StraussCase c{0.05 + 0.5 * u(rng), 0.2 + 2.0 * u(rng), 1.2 + 3.0 * u(rng)};
    const double lambda = 0.1 + 5.0 * u(rng);
    const StraussCase s{lambda * c.c1, std::pow(lambda, 1.0 - c.gamma) * c.c2, c.gamma};
    const StraussResult a = strauss_check(c);
    const StraussResult b = strauss_check(s);
    EXPECT_NEAR(a.lhs, b.lhs, 1e-12 * a.lhs);
    EXPECT_NEAR(b.bound, lambda * a.bound, 1e-12 * b.bound);
    if (std::abs(a.lhs - a.rhs) > 1e-9) {
      EXPECT_EQ(a.condition_holds, b.condition_holds);
    }
  }
}

TEST(Strauss, FixedPointRespectsBound) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const StraussCase c{0.01 + u(rng), 0.1 + 2.0 * u(rng), 1.1 + 3.0 * u(rng)};
    const StraussResult r = strauss_check(c);
    if (!r.condition_holds) continue;
    const FixedPointResult f = strauss_fixed_point(c);
    ASSERT_TRUE(f.converged);
    EXPECT_LT(f.limit, r.bound);
  }
  EXPECT_THROW(strauss_check({0.1, 1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(strauss_check({-0.1, 1.0, 2.0}), InvalidArgument);
}

// Young

TEST(Young, DeltaIsIdentity) {
  const GridSpec g(2, 32, 10.0);
  const Field f = mbe::testing::random_field(g, 3);
  Field delta(g);
  delta[0] = 1.0 / g.cell_volume();
  const Field c = periodic_convolution(f, delta);
  EXPECT_LE(mbe::testing::max_abs_diff(c, f), 1e-12);
  const YoungReport r = young_check(f, delta, 2.0, 1.0);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-10 * r.rhs);
  EXPECT_TRUE(r.holds);
}

TEST(Young, RandomNonNegativeHasSlack) {
  const GridSpec g(2, 32, 10.0);
  const YoungReport r =
      young_check(mbe::testing::random_field(g, 1, 0.0, 1.0), mbe::testing::random_field(g, 2, 0.0, 1.0), 2.0, 2.0);
  EXPECT_EQ(r.r, kInf);
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.slack, 0.0);
}

TEST(Young, L1EqualityForNonNegative) {
  const GridSpec g(1, 128, 10.0);
  const Field f = sample(g, [](double x, double) { return std::exp(-(x - 5.0) * (x - 5.0)); });
  const Field h = sample(g, [](double x, double) { return std::abs(x - 5.0) < 1.0 ? 1.0 : 0.0; });
  const YoungReport r = young_check(f, h, 1.0, 1.0);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-8 * r.rhs);
  EXPECT_THROW(young_check(f, h, 2.0, 2.5), InvalidArgument);
}

// Gagliardo-Nirenberg

TEST(Gagliardo, BumpRatioIsFiniteAndHomogeneous) {
  const GridSpec g(2, 128, 20.0);
  const Field u = sample(g, [](double x, double y) {
    return std::exp(-((x - 10.0) * (x - 10.0) + (y - 10.0) * (y - 10.0)) / 2.0);
  });
  // 1/2 = 1/1.5 - theta/2  =>  theta = 1/3
  const GagliardoReport a = gagliardo_spot_check(u, 1.5, 2.0, 1.0, 1.0 / 3.0);
  EXPECT_TRUE(std::isfinite(a.ratio));
  EXPECT_GT(a.ratio, 0.0);
  const GagliardoReport b = gagliardo_spot_check(2.0 * u, 1.5, 2.0, 1.0, 1.0 / 3.0);
  EXPECT_NEAR(a.ratio, b.ratio, 1e-12 * a.ratio);
  EXPECT_LT(a.scale_spread, 0.05);
}

TEST(Gagliardo, SingleModeClosedForm) {
  const GridSpec g(1, 64, kTwoPi);
  const Field u = sample(g, [](double x, double) { return std::cos(3.0 * x); });
  // d = 1: 1/4 = 1/2 - theta  =>  theta = 1/4
  const GagliardoReport r = gagliardo_spot_check(u, 2.0, 4.0, 1.0, 0.25, {1});
  EXPECT_NEAR(r.homogeneous, 3.0 * r.lp, 1e-10 * r.lp);
  EXPECT_NEAR(r.ratio, r.lhs / (r.lp * std::pow(3.0, 0.25)), 1e-10 * r.ratio);
}

TEST(Gagliardo, RejectsBadExponents) {
  const GridSpec g(1, 64, kTwoPi);
  const Field u = sample(g, [](double x, double) { return std::cos(x); });
  EXPECT_THROW(gagliardo_spot_check(u, 2.0, 4.0, 1.0, 0.3), InvalidArgument);
  EXPECT_THROW(gagliardo_spot_check(u, 2.0, 2.0, 1.0, 0.0), InvalidArgument);
}

TEST(BoundsLab, ReportsSerialize) {
  nlohmann::json j = beta_scaling_report(0.5, 0.5);
  EXPECT_TRUE(j.contains("constant"));
  nlohmann::json s = strauss_check({0.1, 1.0, 2.0});
  EXPECT_EQ(s["bound"].get<double>(), 0.2);
}
