#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbe/field.hpp"

namespace mbe {

/// J(v) = (1 - |v|^2) v.
struct RostKrug {};

/// J(v) = |v|^(q-1) v, with J(0) = 0.
struct PowerLaw {
  double q = 3.0;
};

/// J(v) = (v_x f(v_x), v_y f(v_y)) with f = numer / denom, coefficients in
/// ascending powers. q is the declared asymptotic degree.
struct ComponentRational {
  std::vector<double> numer;
  std::vector<double> denom{1.0};
  double q = 1.0;
};

/// Surface-diffusion current law with its declared growth exponent q.
class CurrentModel {
 public:
  using Kind = std::variant<RostKrug, PowerLaw, ComponentRational>;

  explicit CurrentModel(Kind kind);

  static CurrentModel rost_krug() { return CurrentModel(RostKrug{}); }
  static CurrentModel power_law(double q) { return CurrentModel(PowerLaw{q}); }
  static CurrentModel component_rational(std::vector<double> numer, std::vector<double> denom,
                                         double q);
  /// J identically zero (component-rational with zero numerator), declared degree q.
  static CurrentModel zero(double q);

  const Kind& kind() const noexcept { return kind_; }
  double q() const noexcept;
  std::string name() const;
  bool is_zero() const noexcept;

  /// Pointwise J(v) for a vector in R^2 (second entry ignored in 1-D).
  std::array<double, 2> operator()(std::array<double, 2> v, int dimension = 2) const;

 private:
  Kind kind_;
};

/// p = d (q - 1) / 2, the exponent tied to q.
double model_exponent(const CurrentModel& model, int dimension);

/// Minimum |denominator| a component-rational law may see.
inline constexpr double kDenominatorFloor = 1e-8;

/// J applied at every grid sample of g. Rejects a vanishing denominator
/// (reporting the worst sample) and non-finite output.
VectorField evaluate_current(const CurrentModel& model, const VectorField& g);

/// sup |J(v)| / |v|^q over a fixed 100 x 100 polar sample of 0 < |v| <= r.
double growth_check(const CurrentModel& model, double radius);

/// Largest |J(v) - J(w)| / |v - w| over seeded random pairs with |v|, |w| <= R.
double lipschitz_estimate(const CurrentModel& model, double radius, int pairs, std::uint64_t seed);

void to_json(nlohmann::json& j, const CurrentModel& m);
CurrentModel current_from_json(const nlohmann::json& j);

}  // namespace mbe
