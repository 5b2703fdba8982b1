#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "mbe/bounds_lab.hpp"
#include "mbe/error.hpp"
#include "mbe/fft.hpp"
#include "mbe/phi.hpp"
#include "mbe/semigroup.hpp"
#include "mbe/spectral.hpp"

using namespace mbe;
using mbe::testing::kTwoPi;
using mbe::testing::max_abs_diff;
using mbe::testing::random_field;
using mbe::testing::sample;

TEST(ApplySemigroup, ZeroTimeIsIdentity) {
  const GridSpec g(2, 32, 3.0);
  const Field f = random_field(g, 1);
  EXPECT_EQ(apply_semigroup(f, 0.0), f);
}

TEST(ApplySemigroup, RejectsNegativeTime) {
  const GridSpec g(1, 16, 1.0);
  EXPECT_THROW(apply_semigroup(Field(g), -1e-3), InvalidArgument);
}

TEST(ApplySemigroup, SingleModeDecaysExactly) {
  const GridSpec g(1, 64, 10.0);
  const double k0 = kTwoPi * 3.0 / 10.0;
  const Field f = sample(g, [&](double x, double) { return std::cos(k0 * x); });
  for (double t : {0.01, 0.1, 0.5}) {
    const Field u = apply_semigroup(f, t);
    const Spectrum s = forward(u);
    EXPECT_NEAR(std::abs(s[3]) / std::abs(forward(f)[3]), std::exp(-t * std::pow(k0, 4)), 1e-14);
  }
}

TEST(ApplySemigroup, ExponentAdditivity) {
  const GridSpec g(2, 64, 8.0);
  const Field f = random_field(g, 2);
  const Field two = apply_semigroup(apply_semigroup(f, 0.013), 0.029);
  const Field one = apply_semigroup(f, 0.042);
  EXPECT_LT(lp_norm(two - one, 2.0) / lp_norm(one, 2.0), 1e-13);
}

TEST(ApplySemigroup, ContractionAndMeanConservation) {
  const GridSpec g(2, 32, 4.0);
  const Field f = random_field(g, 3, 0.0, 2.0);
  double prev = lp_norm(f, 2.0);
  const double s0 = forward(f)[0].real();
  for (double t : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const Field u = apply_semigroup(f, t);
    EXPECT_LE(lp_norm(u, 2.0), prev * (1.0 + 1e-15));
    EXPECT_NEAR(mean(u), mean(f), 1e-14);
    EXPECT_NEAR(forward(apply_semigroup(f, t))[0].real(), apply_semigroup(forward(f), t)[0].real(), 1e-12 * std::abs(s0));
  }
  const Spectrum s = forward(f);
  EXPECT_EQ(apply_semigroup(s, 3.0)[0], s[0]);
}

TEST(Multiplier, WeightsInUnitIntervalAndMonotone) {
  const GridSpec g(2, 16, 5.0);
  const WaveTable& w = wave_table(g);
  const Multiplier a = semigroup_multiplier(g, 0.01);
  const Multiplier b = semigroup_multiplier(g, 0.02);
  EXPECT_EQ(a.weights[0], 1.0);
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    EXPECT_GT(a.weights[i], 0.0);
    EXPECT_LE(a.weights[i], 1.0);
    EXPECT_LE(b.weights[i], a.weights[i]);
    for (std::size_t j = 0; j < a.weights.size(); ++j) {
      if (w.k2[j] > w.k2[i]) {
        EXPECT_LE(a.weights[j], a.weights[i]);
      }
    }
  }
}

TEST(Phi1, ZeroAndSafeValue) {
  EXPECT_EQ(phi1(0.0), 1.0);
  EXPECT_NEAR(phi1(-1.0) / (1.0 - std::exp(-1.0)), 1.0, 1e-12);
  EXPECT_NEAR(phi1(-1.0), 0.63212055, 1e-8);
}

TEST(Phi1, SeriesBranchAgainstExtendedPrecision) {
  for (double z : {-1e-6, -3e-4, -9.9e-4, 5e-5, -1e-9}) {
    const long double zl = z;
    const long double ref = std::expm1(zl) / zl;
    EXPECT_NEAR(phi1(z) / static_cast<double>(ref), 1.0, 1e-12) << z;
  }
  // Both sides of the branch switch agree.
  EXPECT_NEAR(phi1(-kPhi1SeriesThreshold * (1 - 1e-12)) / phi1(-kPhi1SeriesThreshold * (1 + 1e-12)),
              1.0, 1e-12);
}

TEST(Phi2, MatchesDefinition) {
  EXPECT_EQ(phi2(0.0), 0.5);
  for (double z : {-1e-7, -0.1, -0.49, -0.51, -2.0, -50.0}) {
    const long double zl = z;
    const long double ref = (std::expm1(zl) - zl) / (zl * zl);
    EXPECT_NEAR(phi2(z) / static_cast<double>(ref), 1.0, 1e-10) << z;
  }
}

TEST(Phi1Multiplier, WeightsMatchScalarPhi) {
  const GridSpec g(1, 32, 2.0);
  const Multiplier m = phi1_multiplier(g, 0.01);
  const WaveTable& w = wave_table(g);
  EXPECT_EQ(m.weights[0], 1.0);
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    EXPECT_EQ(m.weights[i], phi1(-0.01 * w.k2[i] * w.k2[i]));
  }
  EXPECT_THROW(phi1_multiplier(g, 0.0), InvalidArgument);
}

TEST(Cache, HitsAreBitIdentical) {
  const GridSpec g(2, 32, 3.0);
  for (auto kind : {MultiplierKind::semigroup, MultiplierKind::phi1, MultiplierKind::phi2}) {
    const Multiplier& first = cached_multiplier(g, 0.0125, kind);
    const Multiplier& again = cached_multiplier(g, 0.0125, kind);
    EXPECT_EQ(&first, &again);
    const Multiplier fresh = kind == MultiplierKind::semigroup ? semigroup_multiplier(g, 0.0125)
                             : kind == MultiplierKind::phi1    ? phi1_multiplier(g, 0.0125)
                                                               : phi2_multiplier(g, 0.0125);
    EXPECT_EQ(first.weights, fresh.weights);
  }
}

TEST(Kernel, CentreValueMatchesQuadrature) {
  // k_1(0) = (1/pi) int_0^inf exp(-xi^4) d xi.
  boost::math::quadrature::exp_sinh<double> integrator;
  const double oracle =
      integrator.integrate([](double xi) { return std::exp(-std::pow(xi, 4)); }) / std::numbers::pi;
  EXPECT_NEAR(oracle, std::tgamma(1.25) / std::numbers::pi, 1e-12);
  const Field k = kernel_physical(1.0, GridSpec(1, 256, 40.0));
  EXPECT_NEAR(k[0], oracle, 1e-6);
}

TEST(Kernel, UnitDiscreteMass) {
  for (int d : {1, 2}) {
    const GridSpec g(d, d == 1 ? 256 : 128, d == 1 ? 40.0 : 30.0);
    for (double t : {0.1, 0.5, 1.0}) {
      const Field k = kernel_physical(t, g);
      double mass = 0.0;
      for (double v : k.samples()) mass += v;
      EXPECT_NEAR(mass * g.cell_volume(), 1.0, 1e-10);
    }
  }
}

TEST(Kernel, ChangesSign) {
  for (int d : {1, 2}) {
    const Field k = kernel_physical(1.0, GridSpec(d, 128, 30.0));
    double lo = 0.0;
    for (double v : k.samples()) lo = std::min(lo, v);
    EXPECT_LT(lo, -1e-3) << "d = " << d;
  }
}

TEST(Kernel, SelfSimilarity) {
  const GridSpec g(1, 2048, 160.0);
  const Field k1 = kernel_physical(1.0, g);
  const Field k16 = kernel_physical(16.0, g);
  double peak = 0.0;
  for (double v : k1.samples()) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 0; i < 400; ++i) {
    if (std::abs(k1[i]) < 1e-3 * peak) continue;
    EXPECT_NEAR(k16[2 * i] / (0.5 * k1[i]), 1.0, 1e-8) << i;
  }
}

TEST(Kernel, UnresolvedRejected) {
  const GridSpec g(1, 64, 40.0);
  EXPECT_GT(kernel_tail_fraction(g, 1e-6), kKernelTailLimit);
  try {
    kernel_physical(1e-6, g);
    FAIL() << "expected Unresolved";
  } catch (const Unresolved& e) {
    EXPECT_GE(e.tail_fraction(), kKernelTailLimit);
  }
}

TEST(KernelScaling, LinfSlope1D) {
  const auto r = verify_kernel_scaling(GridSpec(1, 256, 40.0), 0, kInf, {0.1, 0.2, 0.4, 0.6, 0.8, 1.0});
  EXPECT_DOUBLE_EQ(r.theoretical_slope, -0.25);
  EXPECT_NEAR(r.fitted_slope, -0.25, 0.01);
}

TEST(KernelScaling, GradientL1Slope2D) {
  const auto r = verify_kernel_scaling(GridSpec(2, 128, 30.0), 1, 1.0, {0.1, 0.2, 0.4, 0.6, 0.8, 1.0});
  EXPECT_DOUBLE_EQ(r.theoretical_slope, -0.25);
  EXPECT_NEAR(r.fitted_slope, -0.25, 0.01);
}

TEST(KernelScaling, L1NormIsConstantAtLeastOne) {
  const auto r = verify_kernel_scaling(GridSpec(1, 256, 40.0), 0, 1.0, {0.1, 0.2, 0.4, 0.6, 1.0});
  EXPECT_DOUBLE_EQ(r.theoretical_slope, 0.0);
  EXPECT_NEAR(r.fitted_slope, 0.0, 0.01);
  // The kernel changes sign, so ||k_t||_1 exceeds the unit mass.
  for (double n : r.norms) EXPECT_GE(n, 1.0 - 1e-10);
}

TEST(KernelScaling, RejectsBadSampling) {
  const GridSpec g(1, 256, 40.0);
  EXPECT_THROW(verify_kernel_scaling(g, 0, 2.0, {0.1, 0.2, 0.3, 0.4}), InvalidArgument);
  EXPECT_THROW(verify_kernel_scaling(g, 0, 2.0, {0.1, 0.2, 0.3, 0.4, 0.5}), InvalidArgument);
  EXPECT_THROW(verify_kernel_scaling(g, 0, 2.0, {0.1, 0.3, 0.2, 0.5, 1.0}), InvalidArgument);
  EXPECT_THROW(verify_kernel_scaling(GridSpec(1, 32, 40.0), 0, 2.0, {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}),
               Unresolved);
}

TEST(KernelScaling, JsonShape) {
  const auto r = verify_kernel_scaling(GridSpec(1, 256, 40.0), 0, kInf, {0.1, 0.2, 0.4, 0.6, 1.0});
  const nlohmann::json j = r;
  for (const char* key : {"d", "n", "p", "times", "norms", "fitted_slope", "theoretical_slope", "max_residual"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["p"], "inf");
}

TEST(Young, KernelConvolutionBoundedByMass) {
  const GridSpec g(2, 64, 20.0);
  const Field k = kernel_physical(0.5, g);
  const double k_l1 = lp_norm(k, 1.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Field f = random_field(g, seed);
    const Field conv = apply_semigroup(f, 0.5);
    for (double p : {1.0, 2.0, kInf}) {
      EXPECT_LE(lp_norm(conv, p), k_l1 * lp_norm(f, p) * (1.0 + 1e-12));
    }
    EXPECT_LT(max_abs_diff(conv, periodic_convolution(k, f)), 1e-12);
  }
}
