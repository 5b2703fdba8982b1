#include "mbe/semigroup.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include <nlohmann/json.hpp>

#include "mbe/error.hpp"
#include "mbe/fit.hpp"
#include "mbe/phi.hpp"
#include "mbe/spectral.hpp"

namespace mbe {

namespace {

Multiplier build(const GridSpec& grid, double t, MultiplierKind kind) {
  const WaveTable& wt = wave_table(grid);
  Multiplier m{grid, std::vector<double>(grid.spectral_size())};
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    const double z = -t * wt.k2[i] * wt.k2[i];
    switch (kind) {
      case MultiplierKind::semigroup: m.weights[i] = std::exp(z); break;
      case MultiplierKind::phi1: m.weights[i] = phi1(z); break;
      case MultiplierKind::phi2: m.weights[i] = phi2(z); break;
    }
  }
  return m;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

std::complex<double> ipow(std::complex<double> z, int n) {
  std::complex<double> r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

Multiplier semigroup_multiplier(const GridSpec& grid, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup time must be non-negative");
  return build(grid, t, MultiplierKind::semigroup);
}

Multiplier phi1_multiplier(const GridSpec& grid, double t) {
  if (!(t > 0.0)) throw InvalidArgument("phi_1 multiplier needs t > 0");
  return build(grid, t, MultiplierKind::phi1);
}

Multiplier phi2_multiplier(const GridSpec& grid, double t) {
  if (!(t > 0.0)) throw InvalidArgument("phi_2 multiplier needs t > 0");
  return build(grid, t, MultiplierKind::phi2);
}

namespace {

using CacheKey = std::tuple<int, int, double, double, int>;

std::shared_mutex& cache_mutex() {
  static std::shared_mutex m;
  return m;
}

std::map<CacheKey, std::unique_ptr<Multiplier>>& cache_map() {
  static std::map<CacheKey, std::unique_ptr<Multiplier>> m;
  return m;
}

}  // namespace

const Multiplier& cached_multiplier(const GridSpec& grid, double t, MultiplierKind kind) {
  const CacheKey key{grid.dimension(), grid.points(), grid.length(), t, static_cast<int>(kind)};
  {
    std::shared_lock lock(cache_mutex());
    auto it = cache_map().find(key);
    if (it != cache_map().end()) return *it->second;
  }
  Multiplier fresh = kind == MultiplierKind::semigroup ? semigroup_multiplier(grid, t)
                     : kind == MultiplierKind::phi1    ? phi1_multiplier(grid, t)
                                                       : phi2_multiplier(grid, t);
  std::unique_lock lock(cache_mutex());
  auto [it, inserted] = cache_map().try_emplace(key, std::make_unique<Multiplier>(std::move(fresh)));
  return *it->second;
}

std::size_t multiplier_cache_size() {
  std::shared_lock lock(cache_mutex());
  return cache_map().size();
}

Spectrum apply(const Multiplier& m, Spectrum s) {
  if (!(m.grid == s.grid())) throw InvalidArgument("multiplier and spectrum grids differ");
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= m.weights[i];
  return s;
}

Spectrum apply_semigroup(Spectrum s, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup time must be non-negative");
  return apply(semigroup_multiplier(s.grid(), t), std::move(s));
}

Field apply_semigroup(const Field& f, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup time must be non-negative");
  f.require_finite("apply_semigroup");
  if (t == 0.0) return f;
  return inverse(apply_semigroup(forward(f), t));
}

double kernel_tail_fraction(const GridSpec& grid, double t) {
  const Multiplier m = semigroup_multiplier(grid, t);
  return spectral_tail_fraction(Spectrum(grid, {m.weights.begin(), m.weights.end()}));
}

Field kernel_physical(double t, const GridSpec& grid) {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  const double tail = kernel_tail_fraction(grid, t);
  if (tail >= kKernelTailLimit) {
    throw Unresolved("kernel at t = " + std::to_string(t) + " is unresolved: spectral tail " +
                         std::to_string(tail) + " >= 1e-8",
                     tail);
  }
  const Multiplier m = semigroup_multiplier(grid, t);
  Spectrum s(grid);
  const double inv_cell = 1.0 / grid.cell_volume();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = m.weights[i] * inv_cell;
  return inverse(s);
}

Field kernel_derivative_magnitude(double t, const GridSpec& grid, int order) {
  if (order < 0) throw InvalidArgument("derivative order must be non-negative");
  if (order == 0) return kernel_physical(t, grid);
  const double tail = kernel_tail_fraction(grid, t);
  if (tail >= kKernelTailLimit) {
    throw Unresolved("kernel at t = " + std::to_string(t) + " is unresolved", tail);
  }
  const WaveTable& wt = wave_table(grid);
  const Multiplier m = semigroup_multiplier(grid, t);
  const double inv_cell = 1.0 / grid.cell_volume();
  const int half = grid.points() / 2;
  const int d = grid.dimension();

  Field mag2(grid);
  // Multi-index (a, order - a) appears binomial(order, a) times in D^n.
  for (int a = 0; a <= (d == 1 ? 0 : order); ++a) {
    const int px = d == 1 ? order : a;
    const int py = d == 1 ? 0 : order - a;
    Spectrum s(grid);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool drop = (px % 2 == 1 && wt.modes[i][0] == -half) ||
                        (d == 2 && py % 2 == 1 && wt.modes[i][1] == -half);
      if (drop) continue;
      std::complex<double> c = ipow({0.0, wt.k[i][0]}, px);
      if (d == 2) c *= ipow({0.0, wt.k[i][1]}, py);
      s[i] = c * m.weights[i] * inv_cell;
    }
    const Field part = inverse(s);
    const double mult = d == 1 ? 1.0 : binomial(order, a);
    for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += mult * part[i] * part[i];
  }
  for (double& v : mag2.samples()) v = std::sqrt(v);
  return mag2;
}

double kernel_theoretical_slope(int dimension, int order, double p) {
  const double inv_p = p == kInf ? 0.0 : 1.0 / p;
  return -(dimension / 4.0) * (1.0 - inv_p) - order / 4.0;
}

KernelScalingReport verify_kernel_scaling(const GridSpec& grid, int order, double p,
                                          const std::vector<double>& times) {
  if (times.size() < 5) throw InvalidArgument("kernel scaling needs at least 5 times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw InvalidArgument("kernel scaling times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidArgument("kernel scaling times must be strictly increasing");
    }
  }
  if (times.back() < 10.0 * times.front()) {
    throw InvalidArgument("kernel scaling times must span at least one decade");
  }
  KernelScalingReport r;
  r.dimension = grid.dimension();
  r.order = order;
  r.exponent = p;
  r.times = times;
  for (double t : times) r.norms.push_back(lp_norm(kernel_derivative_magnitude(t, grid, order), p));
  const LineFit fit = fit_log_log(r.times, r.norms);
  r.fitted_slope = fit.slope;
  r.max_residual = fit.max_residual;
  r.measured_constant = std::exp(fit.intercept);
  r.theoretical_slope = kernel_theoretical_slope(grid.dimension(), order, p);
  return r;
}

void to_json(nlohmann::json& j, const KernelScalingReport& r) {
  j = nlohmann::json{{"d", r.dimension},
                     {"n", r.order},
                     {"p", r.exponent == kInf ? nlohmann::json("inf") : nlohmann::json(r.exponent)},
                     {"times", r.times},
                     {"norms", r.norms},
                     {"fitted_slope", r.fitted_slope},
                     {"theoretical_slope", r.theoretical_slope},
                     {"max_residual", r.max_residual},
                     {"measured_constant", r.measured_constant}};
}

}  // namespace mbe
