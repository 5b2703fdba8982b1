#include "mbe/currents.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mbe/error.hpp"

namespace mbe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

CurrentModel::CurrentModel(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const RostKrug&) {},
                 [](const PowerLaw& m) {
                   if (!(m.q > 1.0) || !std::isfinite(m.q)) {
                     throw InvalidArgument("power-law current needs q > 1");
                   }
                 },
                 [](const ComponentRational& m) {
                   if (m.denom.empty()) throw InvalidArgument("rational current needs a denominator");
                   if (!(m.q >= 1.0)) throw InvalidArgument("rational current needs q >= 1");
                 },
             },
             kind_);
}

CurrentModel CurrentModel::component_rational(std::vector<double> numer, std::vector<double> denom,
                                              double q) {
  return CurrentModel(ComponentRational{std::move(numer), std::move(denom), q});
}

CurrentModel CurrentModel::zero(double q) { return component_rational({0.0}, {1.0}, q); }

double CurrentModel::q() const noexcept {
  return std::visit(overloaded{
                        [](const RostKrug&) { return 3.0; },
                        [](const PowerLaw& m) { return m.q; },
                        [](const ComponentRational& m) { return m.q; },
                    },
                    kind_);
}

std::string CurrentModel::name() const {
  return std::visit(overloaded{
                        [](const RostKrug&) { return std::string("rost_krug"); },
                        [](const PowerLaw&) { return std::string("power_law"); },
                        [](const ComponentRational&) { return std::string("component_rational"); },
                    },
                    kind_);
}

bool CurrentModel::is_zero() const noexcept {
  const auto* r = std::get_if<ComponentRational>(&kind_);
  if (!r) return false;
  for (double c : r->numer) {
    if (c != 0.0) return false;
  }
  return true;
}

std::array<double, 2> CurrentModel::operator()(std::array<double, 2> v, int dimension) const {
  if (dimension == 1) v[1] = 0.0;
  return std::visit(
      overloaded{
          [&](const RostKrug&) -> std::array<double, 2> {
            const double s = 1.0 - (v[0] * v[0] + v[1] * v[1]);
            return {s * v[0], s * v[1]};
          },
          [&](const PowerLaw& m) -> std::array<double, 2> {
            const double r = std::sqrt(v[0] * v[0] + v[1] * v[1]);
            if (r == 0.0) return {0.0, 0.0};
            const double s = std::pow(r, m.q - 1.0);
            return {s * v[0], s * v[1]};
          },
          [&](const ComponentRational& m) -> std::array<double, 2> {
            auto f = [&](double x) { return horner(m.numer, x) / horner(m.denom, x); };
            return {v[0] * f(v[0]), dimension == 1 ? 0.0 : v[1] * f(v[1])};
          },
      },
      kind_);
}

double model_exponent(const CurrentModel& model, int dimension) {
  return dimension * (model.q() - 1.0) / 2.0;
}

VectorField evaluate_current(const CurrentModel& model, const VectorField& g) {
  const GridSpec& grid = g.grid();
  const int d = grid.dimension();
  const std::size_t n = grid.size();

  if (const auto* r = std::get_if<ComponentRational>(&model.kind())) {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_at = 0;
    int worst_axis = 0;
    for (int a = 0; a < d; ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        const double q = std::abs(horner(r->denom, g[a][i]));
        if (q < worst) {
          worst = q;
          worst_at = i;
          worst_axis = a;
        }
      }
    }
    if (worst <= kDenominatorFloor) {
      std::ostringstream msg;
      msg << "rational current denominator vanishes: |denom| = " << worst << " at sample "
          << worst_at << ", axis " << worst_axis;
      throw InvalidArgument(msg.str());
    }
  }

  VectorField out(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const std::array<double, 2> v{g[0][i], d == 2 ? g[1][i] : 0.0};
    const auto j = model(v, d);
    for (int a = 0; a < d; ++a) {
      if (!std::isfinite(j[a])) {
        throw BlowUp("current is non-finite at sample " + std::to_string(i),
                     std::numeric_limits<double>::quiet_NaN());
      }
      out[a][i] = j[a];
    }
  }
  return out;
}

double growth_check(const CurrentModel& model, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("growth check radius must be positive");
  const double q = model.q();
  double sup = 0.0;
  constexpr int kDirections = 100;
  constexpr int kMagnitudes = 100;
  for (int a = 0; a < kDirections; ++a) {
    const double theta = 2.0 * std::numbers::pi * (a + 0.5) / kDirections;
    for (int m = 1; m <= kMagnitudes; ++m) {
      const double r = radius * m / kMagnitudes;
      const std::array<double, 2> v{r * std::cos(theta), r * std::sin(theta)};
      const auto j = model(v);
      const double ratio = std::hypot(j[0], j[1]) / std::pow(r, q);
      if (!std::isfinite(ratio)) throw InvalidArgument("growth check produced a non-finite ratio");
      sup = std::max(sup, ratio);
    }
  }
  return sup;
}

double lipschitz_estimate(const CurrentModel& model, double radius, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&]() -> std::array<double, 2> {
    const double r = radius * std::sqrt(unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    return {r * std::cos(th), r * std::sin(th)};
  };
  double c = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const auto v = draw();
    const auto w = draw();
    const double dv = std::hypot(v[0] - w[0], v[1] - w[1]);
    if (dv == 0.0) continue;
    const auto jv = model(v);
    const auto jw = model(w);
    c = std::max(c, std::hypot(jv[0] - jw[0], jv[1] - jw[1]) / dv);
  }
  return c;
}

void to_json(nlohmann::json& j, const CurrentModel& m) {
  std::visit(overloaded{
                 [&](const RostKrug&) { j = {{"kind", "rost_krug"}, {"q", 3.0}}; },
                 [&](const PowerLaw& p) { j = {{"kind", "power_law"}, {"q", p.q}}; },
                 [&](const ComponentRational& r) {
                   j = {{"kind", "component_rational"}, {"numer", r.numer}, {"denom", r.denom}, {"q", r.q}};
                 },
             },
             m.kind());
}

CurrentModel current_from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", std::string("rost_krug"));
  if (kind == "rost_krug") return CurrentModel::rost_krug();
  if (kind == "power_law") return CurrentModel::power_law(j.value("q", 3.0));
  if (kind == "component_rational") {
    return CurrentModel::component_rational(j.value("numer", std::vector<double>{0.0}),
                                            j.value("denom", std::vector<double>{1.0}),
                                            j.value("q", 1.0));
  }
  if (kind == "zero") return CurrentModel::zero(j.value("q", 3.0));
  throw InvalidArgument("unknown current kind '" + kind + "'");
}

}  // namespace mbe
