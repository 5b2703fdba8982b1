#include "mbe/norm_series.hpp"

#include <algorithm>
#include <cstdio>

#include "mbe/error.hpp"
#include "mbe/spectral.hpp"

namespace mbe {

std::string exponent_label(double exponent) {
  if (exponent == kInf) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", exponent);
  return buf;
}

std::string norm_column(std::string_view prefix, double exponent) {
  return std::string(prefix) + "_L" + exponent_label(exponent);
}

NormSeries::NormSeries(std::vector<std::string> column_names)
    : names_(std::move(column_names)), columns_(names_.size()) {}

void NormSeries::append(double time, const std::vector<double>& values) {
  if (values.size() != names_.size()) throw InvalidArgument("norm row has the wrong width");
  if (!times_.empty() && !(time > times_.back())) {
    throw InvalidArgument("norm series times must increase");
  }
  times_.push_back(time);
  for (std::size_t c = 0; c < values.size(); ++c) columns_[c].push_back(values[c]);
}

bool NormSeries::has(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& NormSeries::column(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidArgument("no norm track named '" + std::string(name) + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

}  // namespace mbe
