#include "mbe/phi.hpp"

#include <cmath>

namespace mbe {

double phi1(double z) noexcept {
  if (std::abs(z) < kPhi1SeriesThreshold) {
    // 1 + z/2 + z^2/6 + z^3/24 + z^4/120 + z^5/720; truncation < |z|^6/5040.
    return 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720)))));
  }
  return std::expm1(z) / z;
}

double phi2(double z) noexcept {
  if (std::abs(z) < 0.5) {
    // sum_{j<16} z^j / (j+2)!, Horner from the top term.
    double term_inv = 1.0;  // (j+2)! for j = 15
    for (int i = 2; i <= 17; ++i) term_inv *= i;
    double acc = 0.0;
    for (int j = 15; j >= 0; --j) {
      acc = acc * z + 1.0 / term_inv;
      term_inv /= (j + 2);
    }
    return acc;
  }
  return (std::expm1(z) - z) / (z * z);
}

}  // namespace mbe
