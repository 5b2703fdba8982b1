#pragma once

#include <span>

namespace mbe {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Largest |y_i - (slope x_i + intercept)|.
  double max_residual = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Unweighted least squares of log(y) against log(x). Rejects non-positive data.
LineFit fit_log_log(std::span<const double> x, std::span<const double> y);

}  // namespace mbe
