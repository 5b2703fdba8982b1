#pragma once

namespace mbe {

/// Below this |z| the phi functions switch to their Taylor series.
inline constexpr double kPhi1SeriesThreshold = 1e-3;

/// phi_1(z) = (e^z - 1) / z with phi_1(0) = 1.
double phi1(double z) noexcept;
/// phi_2(z) = (e^z - 1 - z) / z^2 with phi_2(0) = 1/2.
double phi2(double z) noexcept;

}  // namespace mbe
