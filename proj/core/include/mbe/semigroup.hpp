#pragma once

#include <vector>

#include "mbe/field.hpp"
#include "mbe/fft.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mbe {

/// Non-negative real weights over the stored spectral coefficients.
struct Multiplier {
  GridSpec grid;
  std::vector<double> weights;
};

/// exp(-t |k|^4). Rejects t < 0.
Multiplier semigroup_multiplier(const GridSpec& grid, double t);
/// phi_1(-t |k|^4). Rejects t <= 0.
Multiplier phi1_multiplier(const GridSpec& grid, double t);
/// phi_2(-t |k|^4). Rejects t <= 0.
Multiplier phi2_multiplier(const GridSpec& grid, double t);

enum class MultiplierKind { semigroup, phi1, phi2 };

/// Shared table of multipliers keyed by (grid, t, kind). Hits return the same
/// object that a fresh computation would produce bit for bit.
const Multiplier& cached_multiplier(const GridSpec& grid, double t, MultiplierKind kind);
std::size_t multiplier_cache_size();

Spectrum apply(const Multiplier& m, Spectrum s);

/// k_t * f on the torus: the spectrum times exp(-t |k|^4).
Field apply_semigroup(const Field& f, double t);
Spectrum apply_semigroup(Spectrum s, double t);

/// Energy fraction of exp(-t|k|^4) above the top-octave cutoff.
double kernel_tail_fraction(const GridSpec& grid, double t);
inline constexpr double kKernelTailLimit = 1e-8;

/// Physical biharmonic heat kernel on the grid, with discrete mass exactly 1
/// (up to rounding). Throws Unresolved when the kernel is too narrow for the grid.
Field kernel_physical(double t, const GridSpec& grid);

/// Pointwise Frobenius magnitude of the order-n derivative tensor D^n k_t.
Field kernel_derivative_magnitude(double t, const GridSpec& grid, int order);

struct KernelScalingReport {
  int dimension = 0;
  int order = 0;
  double exponent = 1.0;
  std::vector<double> times;
  std::vector<double> norms;
  double fitted_slope = 0.0;
  double theoretical_slope = 0.0;
  double max_residual = 0.0;
  /// exp of the fitted intercept: the measured constant C_{p,n}.
  double measured_constant = 0.0;
};

/// -(d/4)(1 - 1/p) - n/4.
double kernel_theoretical_slope(int dimension, int order, double p);

/// Fits log ||D^n k_t||_{L^p} against log t. Needs >= 5 strictly increasing
/// resolved times spanning at least a decade.
KernelScalingReport verify_kernel_scaling(const GridSpec& grid, int order, double p,
                                          const std::vector<double>& times);

void to_json(nlohmann::json& j, const KernelScalingReport& r);

}  // namespace mbe
