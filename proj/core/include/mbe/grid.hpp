#pragma once

#include <cstddef>

namespace mbe {

/// Uniform periodic box [0, L)^d sampled with N points per axis.
///
/// Physical samples are stored row-major (last axis fastest). Spectral
/// coefficients use the real-to-complex half layout: all axes but the last
/// hold N modes, the last holds N/2 + 1. Signed mode numbers run over
/// {-N/2, ..., N/2 - 1}; on the last axis index N/2 stands for -N/2.
class GridSpec {
 public:
  GridSpec(int dimension, int points_per_axis, double box_length);

  int dimension() const noexcept { return dimension_; }
  int points() const noexcept { return points_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / points_; }
  double cell_volume() const noexcept;
  double volume() const noexcept;

  /// Number of physical samples, N^d.
  std::size_t size() const noexcept;
  /// Number of stored spectral coefficients, N^(d-1) * (N/2 + 1).
  std::size_t spectral_size() const noexcept;
  int spectral_extent() const noexcept { return points_ / 2 + 1; }

  /// Signed mode number for a storage index along an axis.
  int mode(int index) const noexcept { return index < points_ / 2 ? index : index - points_; }
  /// Angular wavenumber 2*pi*m/L.
  double wavenumber(int m) const noexcept;
  /// Largest retained |m| under the two-thirds rule.
  int dealias_cutoff() const noexcept { return points_ / 3; }

  bool operator==(const GridSpec&) const = default;

 private:
  int dimension_;
  int points_;
  double length_;
};

}  // namespace mbe
