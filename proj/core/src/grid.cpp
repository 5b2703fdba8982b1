#include "mbe/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mbe/error.hpp"

namespace mbe {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec::GridSpec(int dimension, int points_per_axis, double box_length)
    : dimension_(dimension), points_(points_per_axis), length_(box_length) {
  if (dimension != 1 && dimension != 2) {
    throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dimension));
  }
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
    throw InvalidArgument("points per axis must be a power of two >= 8, got " +
                          std::to_string(points_per_axis));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw InvalidArgument("box length must be positive and finite");
  }
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), dimension_); }

double GridSpec::volume() const noexcept { return std::pow(length_, dimension_); }

std::size_t GridSpec::size() const noexcept {
  std::size_t n = 1;
  for (int a = 0; a < dimension_; ++a) n *= static_cast<std::size_t>(points_);
  return n;
}

std::size_t GridSpec::spectral_size() const noexcept {
  return size() / static_cast<std::size_t>(points_) * static_cast<std::size_t>(spectral_extent());
}

double GridSpec::wavenumber(int m) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

}  // namespace mbe
