#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mbe/grid.hpp"

namespace mbe {

/// Real samples of a scalar function on a periodic grid.
class Field {
 public:
  explicit Field(GridSpec grid);
  /// Takes ownership of samples; rejects wrong length or non-finite values.
  Field(GridSpec grid, std::vector<double> samples);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  double& operator[](std::size_t i) noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }

  bool all_finite() const noexcept;
  /// Throws InvalidArgument if any sample is NaN or infinite.
  void require_finite(const char* context) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double scale) noexcept;

  bool operator==(const Field&) const = default;

 private:
  GridSpec grid_;
  std::vector<double> samples_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double scale, Field a);

/// d components sharing one grid (gradients and currents).
class VectorField {
 public:
  explicit VectorField(GridSpec grid);
  explicit VectorField(std::vector<Field> components);

  const GridSpec& grid() const noexcept { return grid_; }
  int dimension() const noexcept { return static_cast<int>(components_.size()); }
  const Field& operator[](int axis) const noexcept { return components_[axis]; }
  Field& operator[](int axis) noexcept { return components_[axis]; }

  /// Pointwise Euclidean magnitude.
  Field magnitude() const;

 private:
  GridSpec grid_;
  std::vector<Field> components_;
};

/// Fourier coefficients of a real field in the half-complex layout.
///
/// The forward transform is unnormalized; the inverse carries 1/N^d.
class Spectrum {
 public:
  explicit Spectrum(GridSpec grid);
  Spectrum(GridSpec grid, std::vector<std::complex<double>> coefficients);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> coefficients() const noexcept { return coeffs_; }
  std::span<std::complex<double>> coefficients() noexcept { return coeffs_; }
  std::complex<double> operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  std::complex<double>& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Spectrum& operator+=(const Spectrum& other);
  Spectrum& operator-=(const Spectrum& other);
  Spectrum& operator*=(double scale) noexcept;

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace mbe
