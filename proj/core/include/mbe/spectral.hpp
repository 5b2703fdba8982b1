#pragma once

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "mbe/fft.hpp"
#include "mbe/field.hpp"

namespace mbe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-coefficient wavevector data for a grid, cached and shared.
struct WaveTable {
  /// Signed mode numbers for each stored coefficient, per axis.
  std::vector<std::array<int, 2>> modes;
  /// Wavevector components k_j for each coefficient (zero beyond dimension).
  std::vector<std::array<double, 2>> k;
  /// |k|^2 for each coefficient.
  std::vector<double> k2;
  /// True when any axis sits on the Nyquist mode -N/2.
  std::vector<bool> nyquist;
};

const WaveTable& wave_table(const GridSpec& grid);

/// Calls fn(index, modes) for every stored spectral coefficient.
void for_each_mode(const GridSpec& grid,
                   const std::function<void(std::size_t, std::array<int, 2>)>& fn);

/// Component j is the inverse transform of i k_j f^. Exact for band-limited f.
VectorField spectral_gradient(const Field& f);
VectorField spectral_gradient(const Spectrum& f);
/// Spectral divergence, returned in spectral form (k = 0 coefficient is 0).
Spectrum spectral_divergence_hat(const VectorField& v);
Field spectral_divergence(const VectorField& v);

Field spectral_laplacian(const Field& f);
/// Delta^2 f via the |k|^4 multiplier.
Field spectral_biharmonic(const Field& f);
/// |D|^s f via the |k|^s multiplier (homogeneous, kills the mean).
Field fractional_derivative(const Field& f, double s);

/// Zeroes every coefficient with some |m| > N/3.
Spectrum dealias(Spectrum s);

/// (sum |f_i|^p h^d)^(1/p); p = kInf gives max |f_i|. Rejects p < 1.
double lp_norm(const Field& f, double p);
/// L^p norm of the pointwise magnitude of v.
double lp_norm(const VectorField& v, double p);
/// ||f||_p + ||grad f||_p.
double w1p_norm(const Field& f, const VectorField& grad, double p);
double mean(const Field& f);

/// h^d sum |f_i|^2 evaluated from the spectrum (half-layout weights applied).
double spectral_energy(const Spectrum& s);
/// Fraction of spectral energy carried by modes with max |m| > N/4.
double spectral_tail_fraction(const Spectrum& s);
/// max |f| over samples within N/8 of the box edge, divided by max |f|.
double boundary_shell_ratio(const Field& f);

/// Norms at a set of exponents for one time instant.
struct NormReport {
  double time = 0.0;
  std::map<double, double> lp;    // ||u||_{L^e}
  std::map<double, double> grad;  // ||grad u||_{L^e}
  std::map<double, double> w1p;   // ||u||_{L^e} + ||grad u||_{L^e}
  double mean = 0.0;
};

NormReport compute_norms(const Field& u, const VectorField& grad,
                         const std::vector<double>& exponents, double time);

}  // namespace mbe
