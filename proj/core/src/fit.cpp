#include "mbe/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mbe/error.hpp"

namespace mbe {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit: x and y lengths differ");
  if (x.size() < 2) throw InvalidArgument("fit: need at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - (fit.slope * x[i] + fit.intercept)));
  }
  return fit;
}

LineFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw InvalidArgument("log-log fit: non-positive abscissa");
    lx[i] = std::log(x[i]);
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw InvalidArgument("log-log fit: non-positive value");
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace mbe
