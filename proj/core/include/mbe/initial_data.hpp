#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mbe/field.hpp"

namespace mbe {

enum class InitialFamily { gaussian_bump, random_band, multibump };

std::string to_string(InitialFamily f);
InitialFamily initial_family_from_string(const std::string& s);

struct InitialDataSpec {
  InitialFamily family = InitialFamily::gaussian_bump;
  /// Peak slope max|grad u0|.
  double amplitude = 0.1;
  std::uint64_t seed = 1;
  /// Profile width; 0 selects L / 32.
  double width = 0.0;

  void validate() const;
};

void to_json(nlohmann::json& j, const InitialDataSpec& s);
InitialDataSpec initial_data_from_json(const nlohmann::json& j);

/// Mean-zero profile centred in the box, negligible outside the central half,
/// scaled so that max|grad u0| equals the amplitude.
Field make_initial_data(const InitialDataSpec& spec, const GridSpec& grid);

inline Field make_initial_data(InitialFamily family, const GridSpec& grid, double amplitude,
                               std::uint64_t seed) {
  return make_initial_data(InitialDataSpec{family, amplitude, seed, 0.0}, grid);
}

/// Largest |u| outside the central half-box relative to max|u|.
double outside_central_half(const Field& u);

}  // namespace mbe
