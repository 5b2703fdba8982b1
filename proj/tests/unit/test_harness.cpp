#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "mbe/error.hpp"
#include "mbe/experiment.hpp"
#include "mbe/harness.hpp"
#include "mbe/initial_data.hpp"
#include "mbe/spectral.hpp"

using namespace mbe;

namespace {

NormSeries synthetic(const std::vector<std::string>& names,
                     const std::vector<std::function<double(double)>>& f, double t0, double t1,
                     int samples) {
  NormSeries s(names);
  for (int i = 0; i < samples; ++i) {
    const double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (samples - 1));
    std::vector<double> row;
    for (const auto& g : f) row.push_back(g(t));
    s.append(t, row);
  }
  return s;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mbe_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

// Initial data

TEST(InitialData, AmplitudeScalesLinearly) {
  const GridSpec g(2, 64, 20.0);
  for (InitialFamily f : {InitialFamily::gaussian_bump, InitialFamily::random_band, InitialFamily::multibump}) {
    const double a = lp_norm(spectral_gradient(make_initial_data(f, g, 0.1, 4)), 2.0);
    const double b = lp_norm(spectral_gradient(make_initial_data(f, g, 0.2, 4)), 2.0);
    EXPECT_NEAR(b / a, 2.0, 1e-12) << to_string(f);
  }
}

TEST(InitialData, MeanZeroAndCentred) {
  const GridSpec g(2, 128, 20.0);
  for (InitialFamily f : {InitialFamily::gaussian_bump, InitialFamily::random_band, InitialFamily::multibump}) {
    const Field u = make_initial_data(f, g, 0.1, 2);
    EXPECT_LE(std::abs(mean(u)), 1e-15 * mbe::testing::max_abs(u)) << to_string(f);
    EXPECT_LT(outside_central_half(u), 1e-6) << to_string(f);
    EXPECT_NEAR(lp_norm(spectral_gradient(u), kInf), 0.1, 1e-12);
  }
}

TEST(InitialData, SeedReproducible) {
  const GridSpec g(2, 64, 20.0);
  const Field a = make_initial_data(InitialFamily::random_band, g, 0.1, 9);
  const Field b = make_initial_data(InitialFamily::random_band, g, 0.1, 9);
  const Field c = make_initial_data(InitialFamily::random_band, g, 0.1, 10);
  EXPECT_EQ(a, b);
  EXPECT_GT(mbe::testing::max_abs_diff(a, c), 0.0);
}

TEST(InitialData, SpecValidationAndJson) {
  InitialDataSpec s;
  s.amplitude = -1.0;
  EXPECT_THROW(s.validate(), InvalidArgument);
  EXPECT_THROW(initial_family_from_string("square"), InvalidArgument);
  InitialDataSpec t{InitialFamily::multibump, 0.5, 3, 1.5};
  const InitialDataSpec back = initial_data_from_json(nlohmann::json(t));
  EXPECT_EQ(back.family, InitialFamily::multibump);
  EXPECT_EQ(back.amplitude, 0.5);
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(back.width, 1.5);
}

// Fitting

TEST(Fit, ExactPowerLaw) {
  const NormSeries s = synthetic({"x"}, {[](double t) { return 3.0 * std::pow(t, -0.37); }}, 0.1, 10.0, 50);
  const DecayFit f = fit_exponent(s, "x", {0.1, 10.0});
  EXPECT_NEAR(f.slope, -0.37, 1e-6);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-6);
  EXPECT_EQ(f.samples, 50u);
}

TEST(Fit, RejectsUnderdeterminedAndNonPositive) {
  NormSeries one({"x"});
  one.append(1.0, {1.0});
  EXPECT_THROW(fit_exponent(one, "x", {0.5, 2.0}), InvalidArgument);
  const NormSeries neg = synthetic({"x"}, {[](double t) { return t - 1.0; }}, 0.1, 10.0, 50);
  EXPECT_THROW(fit_exponent(neg, "x", {0.1, 10.0}), InvalidArgument);
  const NormSeries ok = synthetic({"x"}, {[](double t) { return t; }}, 0.1, 10.0, 50);
  EXPECT_THROW(fit_exponent(ok, "y", {0.1, 10.0}), InvalidArgument);
}

TEST(Fit, NoisyPowerLaw) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  const NormSeries s =
      synthetic({"x"}, {[&](double t) { return std::pow(t, -0.5) * (1.0 + noise(rng)); }}, 0.1, 10.0, 200);
  EXPECT_NEAR(fit_exponent(s, "x", {0.1, 10.0}).slope, -0.5, 0.02);
}

TEST(Fit, OnePlusTAxis) {
  const NormSeries up = synthetic({"x"}, {[](double t) { return std::pow(1.0 + t, 0.25); }}, 0.1, 10.0, 100);
  EXPECT_NEAR(fit_exponent(up, "x", {0.1, 10.0}, TimeAxis::one_plus_t).slope, 0.25, 0.01);
  const NormSeries down =
      synthetic({"x"}, {[](double t) { return std::pow(1.0 + t, -1.0 / 6.0); }}, 0.1, 10.0, 100);
  DecayFit f = fit_exponent(down, "x", {0.1, 10.0}, TimeAxis::one_plus_t);
  EXPECT_NEAR(f.slope, -1.0 / 6.0, 0.01);
  apply_slope_bound(f, -1.0 / 6.0);
  EXPECT_TRUE(f.pass);
  EXPECT_NEAR(f.margin, 0.05, 1e-6);
  apply_slope_bound(f, -0.5);
  EXPECT_FALSE(f.pass);
}

// Checks on runs

TEST(Harness, LinearRunPassesGradientBounds) {
  const GridSpec g(2, 64, 20.0);
  const Field u0 = make_initial_data(InitialFamily::gaussian_bump, g, 0.1, 1);
  SolverConfig c = experiment_solver_defaults();
  const Trajectory t = solve(u0, 2.0, CurrentModel::zero(3.0), c);
  const GradientBoundReport r = check_gradient_bounds(t, 2.0, {0.1, 2.0});
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.lp.ratio, 1.0 + 1e-12);
  EXPECT_GT(r.M, 0.0);
}

TEST(Harness, IncompleteRunRejected) {
  const GridSpec g(2, 64, 20.0);
  const Field u0 = make_initial_data(InitialFamily::gaussian_bump, g, 10.0, 1);
  const Trajectory t = solve(u0, 1.0, CurrentModel::power_law(3.0), experiment_solver_defaults());
  ASSERT_FALSE(t.completed());
  EXPECT_THROW(check_gradient_bounds(t, 2.0, {0.1, 1.0}), InvalidArgument);
}

TEST(Harness, InterpolationEndpoint) {
  const NormSeries s = synthetic({"grad_L2", "grad_Linf"},
                                 {[](double t) { return 1.0 / (1.0 + t); }, [](double t) { return std::pow(t, -0.25); }},
                                 0.1, 10.0, 100);
  const InterpolatedDecayReport r = check_interpolated_decay(s, 2.0, 2, 1e-9, {0.1, 10.0});
  EXPECT_NEAR(r.p_theta, 2.0, 1e-8);
  EXPECT_EQ(r.fit.track, "grad_L2");
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(check_interpolated_decay(s, 2.0, 2, 0.5, {0.1, 10.0}), InvalidArgument);
  EXPECT_THROW(check_interpolated_decay(s, 2.0, 2, 0.0, {0.1, 10.0}), InvalidArgument);
}

TEST(Harness, InterpolatedExponentAtQ) {
  ExperimentConfig c;
  EXPECT_DOUBLE_EQ(c.interpolation_theta(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.exponent_p() / (1.0 - c.interpolation_theta()), c.exponent_p() * c.model.q());
}

TEST(Harness, GrowthBoundArithmetic) {
  const NormSeries s = synthetic({"u_L2", "u_Linf"},
                                 {[](double t) { return std::pow(1.0 + t, 0.2); },
                                  [](double t) { return std::pow(1.0 + t, 0.45); }},
                                 0.1, 10.0, 100);
  const GrowthReport r = check_growth(s, 2.0, 2, {0.1, 10.0});
  EXPECT_DOUBLE_EQ(r.lp.theoretical_slope, 0.25);
  EXPECT_DOUBLE_EQ(r.linf.theoretical_slope, 0.5);
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(check_growth(s, 2.0, 2, {1.0, 10.0}), InvalidArgument);
}

TEST(Harness, CoarseningWindowAndChain) {
  const auto [lo2, hi2] = coarsening_window(2);
  EXPECT_DOUBLE_EQ(lo2, 2.0);
  EXPECT_DOUBLE_EQ(hi2, 3.0);
  const auto [lo1, hi1] = coarsening_window(1);
  EXPECT_DOUBLE_EQ(lo1, 3.0);
  EXPECT_DOUBLE_EQ(hi1, 5.0);

  const ExponentChain c = exponent_chain(2.5, 2);
  EXPECT_EQ(c.p, "3/2");
  EXPECT_EQ(c.theta, "1/3");
  EXPECT_EQ(c.bound, "1/6");
  EXPECT_TRUE(c.theta_consistent);
  ASSERT_TRUE(c.d2_remark.has_value());
  EXPECT_EQ(*c.d2_remark, "-1/6");
  EXPECT_FALSE(*c.d2_identity);

  const ExponentChain d = exponent_chain(3.5, 1);
  EXPECT_EQ(d.p, "5/4");
  EXPECT_EQ(d.bound, "7/40");
  EXPECT_TRUE(d.theta_consistent);
  EXPECT_FALSE(d.d2_remark.has_value());

  const NormSeries s = synthetic({"coarseness"}, {[](double t) { return std::pow(1.0 + t, -1.0 / 6.0); }}, 0.1, 10.0, 100);
  EXPECT_THROW(check_coarseness(s, 3.0, 2, {0.1, 10.0}), InvalidArgument);
  EXPECT_THROW(check_coarseness(s, 2.0, 2, {0.1, 10.0}), InvalidArgument);
  const CoarsenessReport r = check_coarseness(s, 2.5, 2, {0.1, 10.0});
  EXPECT_NEAR(r.fit.slope, -1.0 / 6.0, 0.01);
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.d2_remark_slope.has_value());
  EXPECT_NEAR(*r.d2_remark_slope, -1.0 / 6.0, 1e-15);
}

TEST(Harness, ScanIsDeterministicAndLinearPasses) {
  ExperimentConfig c;
  c.grid = GridSpec(2, 32, 20.0);
  c.horizon = 1.0;
  c.window = FitWindow{0.1, 1.0};
  c.model = CurrentModel::zero(3.0);
  const ScanReport lin = amplitude_scan(c, {0.01, 0.1, 1.0}, 2);
  for (const ScanEntry& e : lin.entries) EXPECT_TRUE(e.pass) << e.amplitude;
  EXPECT_TRUE(lin.monotone);
  EXPECT_FALSE(lin.smallest_fail.has_value());

  c.model = CurrentModel::power_law(3.0);
  const ScanReport dup = amplitude_scan(c, {0.1, 0.1, 0.1}, 3);
  EXPECT_EQ(dup.entries[0].pass, dup.entries[1].pass);
  EXPECT_EQ(dup.entries[1].pass, dup.entries[2].pass);
  EXPECT_EQ(dup.entries[0].M, dup.entries[2].M);
  EXPECT_THROW(amplitude_scan(c, {1.0, 0.1, 0.2}), InvalidArgument);
}

TEST(Harness, ConfigDefaultsAndJson) {
  const ExperimentConfig d = experiment_config_from_json(nlohmann::json::object());
  EXPECT_EQ(d.grid.dimension(), 2);
  EXPECT_EQ(d.grid.points(), 128);
  EXPECT_EQ(d.solver.step, 0.01);
  EXPECT_EQ(d.horizon, 10.0);
  EXPECT_NEAR(d.fit_window().t_min, 0.5, 1e-15);
  EXPECT_EQ(d.fit_window().t_max, 10.0);

  const auto j = nlohmann::json::parse(R"({"grid": {"d": 1, "N": 64, "L": 30},
    "current": {"kind": "power_law", "q": 3.5}, "solver": {"nodes": 5}, "horizon": 2,
    "fit_window": {"t_min": 0.2, "t_max": 2}})");
  const ExperimentConfig c = experiment_config_from_json(j);
  EXPECT_EQ(c.grid.dimension(), 1);
  EXPECT_EQ(c.solver.nodes, 5);
  EXPECT_EQ(c.solver.step, 0.01);
  EXPECT_DOUBLE_EQ(c.exponent_p(), 1.25);
  EXPECT_EQ(c.fit_window().t_min, 0.2);
  const ExperimentConfig back = experiment_config_from_json(nlohmann::json(c));
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(c));

  ExperimentConfig bad = c;
  bad.window = FitWindow{0.001, 2.0};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Harness, VerdictsReproduceFromPersistedRun) {
  ExperimentConfig c;
  c.grid = GridSpec(2, 32, 20.0);
  c.horizon = 2.0;
  c.window = FitWindow{0.1, 2.0};
  c.output_dir = scratch("verdicts").string();
  simulate(c);
  const nlohmann::json a = regenerate_report(c.output_dir);
  const nlohmann::json b = regenerate_report(c.output_dir);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.contains("gradient_bounds"));
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.output_dir) / "verification.json"));
  std::filesystem::remove_all(c.output_dir);
}
