#include "mbe/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbe/error.hpp"

namespace mbe {

Field::Field(GridSpec grid) : grid_(grid), samples_(grid.size(), 0.0) {}

Field::Field(GridSpec grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(samples_.size()) +
                          " samples, grid expects " + std::to_string(grid_.size()));
  }
  require_finite("Field");
}

bool Field::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

void Field::require_finite(const char* context) const {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidArgument(std::string(context) + ": non-finite sample at index " +
                            std::to_string(i));
    }
  }
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("field grids differ");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("field grids differ");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

Field& Field::operator*=(double scale) noexcept {
  for (double& v : samples_) v *= scale;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double scale, Field a) { return a *= scale; }

VectorField::VectorField(GridSpec grid) : grid_(grid) {
  components_.assign(static_cast<std::size_t>(grid.dimension()), Field(grid));
}

VectorField::VectorField(std::vector<Field> components)
    : grid_(components.empty() ? throw InvalidArgument("vector field needs components")
                               : components.front().grid()),
      components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != grid_.dimension()) {
    throw InvalidArgument("vector field needs one component per axis");
  }
  for (const Field& c : components_) {
    if (!(c.grid() == grid_)) throw InvalidArgument("vector field components on different grids");
  }
}

Field VectorField::magnitude() const {
  Field out(grid_);
  auto dst = out.samples();
  for (const Field& c : components_) {
    auto src = c.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i] * src[i];
  }
  for (double& v : dst) v = std::sqrt(v);
  return out;
}

Spectrum::Spectrum(GridSpec grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

Spectrum::Spectrum(GridSpec grid, std::vector<std::complex<double>> coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.spectral_size()) {
    throw InvalidArgument("spectrum size does not match grid");
  }
}

Spectrum& Spectrum::operator+=(const Spectrum& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("spectrum grids differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("spectrum grids differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double scale) noexcept {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

}  // namespace mbe
