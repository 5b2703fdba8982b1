#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mbe {

/// Column name for a norm track, e.g. ("grad", 2) -> "grad_L2", ("u", inf) -> "u_Linf".
std::string norm_column(std::string_view prefix, double exponent);
/// Exponent label as used in column names ("1.5", "inf").
std::string exponent_label(double exponent);

/// Time series of named norm tracks sharing one time axis.
class NormSeries {
 public:
  NormSeries() = default;
  explicit NormSeries(std::vector<std::string> column_names);

  /// Appends a row; values are given in column order.
  void append(double time, const std::vector<double>& values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool has(std::string_view name) const noexcept;
  /// Throws InvalidArgument for an unknown track.
  const std::vector<double>& column(std::string_view name) const;
  std::size_t size() const noexcept { return times_.size(); }

  bool operator==(const NormSeries&) const = default;

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace mbe
