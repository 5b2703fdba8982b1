#include "mbe/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace mbe {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~PlanPair() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(const GridSpec& grid) {
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_pair(grid.dimension(), grid.points());
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto plans = std::make_unique<PlanPair>();
  std::vector<double> real(grid.size());
  std::vector<std::complex<double>> spec(grid.spectral_size());
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  const int n = grid.points();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (grid.dimension() == 1) {
    plans->r2c = fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
    plans->c2r = fftw_plan_dft_c2r_1d(n, c, real.data(), flags | FFTW_DESTROY_INPUT);
  } else {
    plans->r2c = fftw_plan_dft_r2c_2d(n, n, real.data(), c, flags);
    plans->c2r = fftw_plan_dft_c2r_2d(n, n, c, real.data(), flags | FFTW_DESTROY_INPUT);
  }
  return *cache.emplace(key, std::move(plans)).first->second;
}

}  // namespace

Spectrum forward(const Field& f) {
  const PlanPair& plans = plans_for(f.grid());
  Spectrum s(f.grid());
  // r2c preserves its input for out-of-place transforms.
  fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(f.samples().data()),
                       reinterpret_cast<fftw_complex*>(s.coefficients().data()));
  return s;
}

Field inverse(const Spectrum& s) {
  const PlanPair& plans = plans_for(s.grid());
  std::vector<std::complex<double>> scratch(s.coefficients().begin(), s.coefficients().end());
  Field f(s.grid());
  auto out = f.samples();
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(s.grid().size());
  for (double& v : out) v *= scale;
  return f;
}

}  // namespace mbe
