#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "mbe/currents.hpp"
#include "mbe/error.hpp"

using namespace mbe;

namespace {

std::array<double, 2> rotate(std::array<double, 2> v) { return {-v[1], v[0]}; }

}  // namespace

TEST(Currents, RostKrugSubstitution) {
  const auto j = CurrentModel::rost_krug()({0.5, 0.0});
  EXPECT_DOUBLE_EQ(j[0], 0.375);
  EXPECT_DOUBLE_EQ(j[1], 0.0);
  EXPECT_EQ(CurrentModel::rost_krug().q(), 3.0);
}

TEST(Currents, PowerLawOriginAndUnitGradient) {
  for (double q : {1.2, 2.0, 2.5, 3.0, 4.5}) {
    const auto z = CurrentModel::power_law(q)({0.0, 0.0});
    EXPECT_EQ(z[0], 0.0);
    EXPECT_EQ(z[1], 0.0);
  }
  const auto one = CurrentModel::power_law(2.5)({1.0, 0.0});
  EXPECT_EQ(one[0], 1.0);
  EXPECT_EQ(one[1], 0.0);
}

TEST(Currents, PowerLawMagnitudeIsExact) {
  const CurrentModel m = CurrentModel::power_law(2.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const std::array<double, 2> v{u(rng), u(rng)};
    const auto j = m(v);
    EXPECT_NEAR(std::hypot(j[0], j[1]) / std::pow(std::hypot(v[0], v[1]), 2.5), 1.0, 1e-13);
  }
}

TEST(Currents, RejectsInvalidParameters) {
  EXPECT_THROW(CurrentModel::power_law(1.0), InvalidArgument);
  EXPECT_THROW(CurrentModel::component_rational({1.0}, {}, 3.0), InvalidArgument);
  EXPECT_THROW(CurrentModel::component_rational({1.0}, {1.0}, 0.5), InvalidArgument);
}

TEST(Currents, ExponentTiedToDimension) {
  EXPECT_DOUBLE_EQ(model_exponent(CurrentModel::power_law(3.0), 2), 2.0);
  EXPECT_DOUBLE_EQ(model_exponent(CurrentModel::power_law(2.5), 2), 1.5);
  EXPECT_DOUBLE_EQ(model_exponent(CurrentModel::power_law(3.5), 1), 1.25);
  EXPECT_DOUBLE_EQ(model_exponent(CurrentModel::rost_krug(), 2), 2.0);
}

TEST(Currents, GrowthCheckPowerLawIsOne) {
  for (double r : {0.01, 1.0, 5.0}) {
    EXPECT_NEAR(growth_check(CurrentModel::power_law(2.5), r), 1.0, 1e-12);
  }
}

TEST(Currents, GrowthCheckRostKrugDenseOracle) {
  // |J(v)| / |v|^3 = |1 - s^2| / s^2 with s = |v|, largest at the smallest sampled radius.
  double oracle = 0.0;
  for (int m = 1; m <= 100; ++m) {
    const double s = 2.0 * m / 100.0;
    oracle = std::max(oracle, std::abs(1.0 - s * s) / (s * s));
  }
  const double measured = growth_check(CurrentModel::rost_krug(), 2.0);
  EXPECT_TRUE(std::isfinite(measured));
  EXPECT_NEAR(measured / oracle, 1.0, 1e-12);
}

TEST(Currents, RostKrugIsNotUniformlyCubicNearZero) {
  const auto j = CurrentModel::rost_krug()({0.1, 0.0});
  EXPECT_NEAR(std::abs(j[0]) / std::pow(0.1, 3), 99.0, 1e-10);
  EXPECT_GE(growth_check(CurrentModel::rost_krug(), 0.1), 99.0);
}

TEST(Currents, IsotropyUnderQuarterTurns) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const CurrentModel& m : {CurrentModel::rost_krug(), CurrentModel::power_law(2.5)}) {
    for (int i = 0; i < 100; ++i) {
      const std::array<double, 2> v{u(rng), u(rng)};
      const auto lhs = m(rotate(v));
      const auto rhs = rotate(m(v));
      EXPECT_EQ(lhs[0], rhs[0]);
      EXPECT_EQ(lhs[1], rhs[1]);
    }
  }
}

TEST(Currents, Oddness) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const CurrentModel& m : {CurrentModel::rost_krug(), CurrentModel::power_law(3.0)}) {
    for (int i = 0; i < 100; ++i) {
      const std::array<double, 2> v{u(rng), u(rng)};
      const auto a = m(v);
      const auto b = m({-v[0], -v[1]});
      EXPECT_EQ(a[0], -b[0]);
      EXPECT_EQ(a[1], -b[1]);
    }
  }
}

TEST(Currents, LipschitzBoundHoldsOnFreshPairs) {
  for (const CurrentModel& m : {CurrentModel::rost_krug(), CurrentModel::power_law(2.5)}) {
    const double c = lipschitz_estimate(m, 1.0, 20000, 1);
    EXPECT_TRUE(std::isfinite(c));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 2000; ++i) {
      const std::array<double, 2> v{u(rng), u(rng)};
      const std::array<double, 2> w{u(rng), u(rng)};
      const auto jv = m(v);
      const auto jw = m(w);
      const double lhs = std::hypot(jv[0] - jw[0], jv[1] - jw[1]);
      EXPECT_LE(lhs, 1.05 * c * std::hypot(v[0] - w[0], v[1] - w[1]));
    }
  }
}

TEST(Currents, ComponentRationalEvaluatesPerAxis) {
  // f(s) = (1 + s) / (2 + s^2)
  const CurrentModel m = CurrentModel::component_rational({1.0, 1.0}, {2.0, 0.0, 1.0}, 2.0);
  const auto j = m({0.5, -1.0});
  EXPECT_DOUBLE_EQ(j[0], 0.5 * 1.5 / 2.25);
  EXPECT_DOUBLE_EQ(j[1], -1.0 * 0.0 / 3.0);
}

TEST(Currents, DenominatorUnderflowReportsLocation) {
  const GridSpec g(2, 8, 1.0);
  VectorField v(g);
  v[1][13] = 1.0;
  const CurrentModel m = CurrentModel::component_rational({1.0}, {1.0, -1.0}, 1.0);
  try {
    evaluate_current(m, v);
    FAIL() << "expected rejection";
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("sample 13"), std::string::npos) << what;
    EXPECT_NE(what.find("axis 1"), std::string::npos) << what;
  }
}

TEST(Currents, NonFiniteOutputRejected) {
  const GridSpec g(1, 8, 1.0);
  VectorField v(g);
  v[0][2] = 1e200;
  EXPECT_THROW(evaluate_current(CurrentModel::power_law(3.0), v), Error);
}

TEST(Currents, ZeroModelVanishes) {
  const GridSpec g(2, 8, 1.0);
  const VectorField v(std::vector<Field>{mbe::testing::random_field(g, 1), mbe::testing::random_field(g, 2)});
  const VectorField j = evaluate_current(CurrentModel::zero(3.0), v);
  EXPECT_EQ(mbe::testing::max_abs(j[0]), 0.0);
  EXPECT_TRUE(CurrentModel::zero(3.0).is_zero());
  EXPECT_EQ(CurrentModel::zero(3.0).q(), 3.0);
}

TEST(Currents, JsonRoundTrip) {
  for (const CurrentModel& m :
       {CurrentModel::rost_krug(), CurrentModel::power_law(2.5),
        CurrentModel::component_rational({0.0, 1.0}, {1.0, 0.0, 1.0}, 1.0), CurrentModel::zero(3.0)}) {
    const nlohmann::json j = m;
    const CurrentModel back = current_from_json(j);
    EXPECT_EQ(nlohmann::json(back), j);
  }
  EXPECT_EQ(current_from_json(nlohmann::json::parse(R"({"kind":"power_law","q":2.5})")).q(), 2.5);
  EXPECT_THROW(current_from_json(nlohmann::json::parse(R"({"kind":"villain"})")), InvalidArgument);
}
