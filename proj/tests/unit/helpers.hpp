#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

#include "mbe/field.hpp"
#include "mbe/grid.hpp"

namespace mbe::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Field sampled from f(x, y) at grid points (y ignored in 1-D).
inline Field sample(const GridSpec& g, const std::function<double(double, double)>& f) {
  Field out(g);
  const int n = g.points();
  const double h = g.spacing();
  if (g.dimension() == 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i * h, 0.0);
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = f(i * h, j * h);
    }
  }
  return out;
}

inline Field random_field(const GridSpec& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Field out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dist(rng);
  return out;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const Field& a) {
  double m = 0.0;
  for (double v : a.samples()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace mbe::testing
