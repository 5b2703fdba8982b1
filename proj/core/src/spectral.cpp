#include "mbe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <tuple>

#include "mbe/error.hpp"

namespace mbe {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

std::unique_ptr<WaveTable> build_wave_table(const GridSpec& grid) {
  auto table = std::make_unique<WaveTable>();
  const std::size_t n = grid.spectral_size();
  table->modes.resize(n);
  table->k.resize(n);
  table->k2.resize(n);
  table->nyquist.resize(n);
  const int half = grid.points() / 2;
  for_each_mode(grid, [&](std::size_t idx, std::array<int, 2> m) {
    table->modes[idx] = m;
    double k2 = 0.0;
    bool nyq = false;
    for (int a = 0; a < grid.dimension(); ++a) {
      const double ka = grid.wavenumber(m[a]);
      table->k[idx][a] = ka;
      k2 += ka * ka;
      nyq = nyq || m[a] == -half;
    }
    table->k2[idx] = k2;
    table->nyquist[idx] = nyq;
  });
  return table;
}

// Energy weight of a stored coefficient in the half layout.
double half_weight(const GridSpec& grid, std::size_t idx) {
  const std::size_t last = idx % static_cast<std::size_t>(grid.spectral_extent());
  return (last == 0 || last == static_cast<std::size_t>(grid.points() / 2)) ? 1.0 : 2.0;
}

void require_same_grid(const VectorField& v) {
  for (int a = 0; a < v.dimension(); ++a) {
    if (!(v[a].grid() == v.grid())) throw InvalidArgument("vector field components on different grids");
  }
}

}  // namespace

void for_each_mode(const GridSpec& grid,
                   const std::function<void(std::size_t, std::array<int, 2>)>& fn) {
  const int n = grid.points();
  const int ext = grid.spectral_extent();
  if (grid.dimension() == 1) {
    for (int i = 0; i < ext; ++i) fn(static_cast<std::size_t>(i), {grid.mode(i), 0});
    return;
  }
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < ext; ++i1, ++idx) fn(idx, {grid.mode(i0), grid.mode(i1)});
  }
}

const WaveTable& wave_table(const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<WaveTable>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(grid.dimension(), grid.points(), grid.length());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_wave_table(grid)).first;
  return *it->second;
}

VectorField spectral_gradient(const Spectrum& f) {
  const GridSpec& grid = f.grid();
  const WaveTable& wt = wave_table(grid);
  const int half = grid.points() / 2;
  std::vector<Field> comps;
  comps.reserve(static_cast<std::size_t>(grid.dimension()));
  for (int a = 0; a < grid.dimension(); ++a) {
    Spectrum d(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      d[i] = wt.modes[i][a] == -half ? cplx{} : kI * wt.k[i][a] * f[i];
    }
    comps.push_back(inverse(d));
  }
  return VectorField(std::move(comps));
}

VectorField spectral_gradient(const Field& f) {
  f.require_finite("spectral_gradient");
  return spectral_gradient(forward(f));
}

Spectrum spectral_divergence_hat(const VectorField& v) {
  require_same_grid(v);
  const GridSpec& grid = v.grid();
  const WaveTable& wt = wave_table(grid);
  const int half = grid.points() / 2;
  Spectrum out(grid);
  for (int a = 0; a < grid.dimension(); ++a) {
    const Spectrum va = forward(v[a]);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (wt.modes[i][a] != -half) out[i] += kI * wt.k[i][a] * va[i];
    }
  }
  out[0] = cplx{};
  return out;
}

Field spectral_divergence(const VectorField& v) { return inverse(spectral_divergence_hat(v)); }

Field spectral_laplacian(const Field& f) {
  const WaveTable& wt = wave_table(f.grid());
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -wt.k2[i];
  return inverse(s);
}

Field spectral_biharmonic(const Field& f) {
  const WaveTable& wt = wave_table(f.grid());
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= wt.k2[i] * wt.k2[i];
  return inverse(s);
}

Field fractional_derivative(const Field& f, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("fractional order must be non-negative");
  const WaveTable& wt = wave_table(f.grid());
  Spectrum sp = forward(f);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    sp[i] *= wt.k2[i] == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(wt.k2[i], 0.5 * s);
  }
  return inverse(sp);
}

Spectrum dealias(Spectrum s) {
  const WaveTable& wt = wave_table(s.grid());
  const int cutoff = s.grid().dealias_cutoff();
  const int d = s.grid().dimension();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int a = 0; a < d; ++a) {
      if (std::abs(wt.modes[i][a]) > cutoff) {
        s[i] = cplx{};
        break;
      }
    }
  }
  return s;
}

namespace {

double lp_of_samples(std::span<const double> x, double p, double cell) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("L^p exponent must satisfy p >= 1");
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (p == kInf || peak == 0.0) return peak;
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : x) sum += std::abs(v);
    return sum * cell;
  }
  if (p == 2.0) {
    for (double v : x) sum += v * v;
    return std::sqrt(sum * cell);
  }
  // Scaled by the peak so large p cannot overflow.
  for (double v : x) sum += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(sum * cell, 1.0 / p);
}

}  // namespace

double lp_norm(const Field& f, double p) { return lp_of_samples(f.samples(), p, f.grid().cell_volume()); }

double lp_norm(const VectorField& v, double p) {
  if (v.dimension() == 1) return lp_norm(v[0], p);
  return lp_norm(v.magnitude(), p);
}

double w1p_norm(const Field& f, const VectorField& grad, double p) {
  return lp_norm(f, p) + lp_norm(grad, p);
}

double mean(const Field& f) {
  double sum = 0.0;
  for (double v : f.samples()) sum += v;
  return sum / static_cast<double>(f.size());
}

double spectral_energy(const Spectrum& s) {
  const GridSpec& grid = s.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += half_weight(grid, i) * std::norm(s[i]);
  return sum * grid.cell_volume() / static_cast<double>(grid.size());
}

double spectral_tail_fraction(const Spectrum& s) {
  const GridSpec& grid = s.grid();
  const WaveTable& wt = wave_table(grid);
  const int quarter = grid.points() / 4;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = half_weight(grid, i) * std::norm(s[i]);
    total += e;
    const int mmax = std::max(std::abs(wt.modes[i][0]), std::abs(wt.modes[i][1]));
    if (mmax > quarter) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

double boundary_shell_ratio(const Field& f) {
  const GridSpec& grid = f.grid();
  const int n = grid.points();
  const int shell = n / 8;
  auto in_shell = [&](int i) { return i < shell || i >= n - shell; };
  double peak = 0.0;
  double edge = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const double a = std::abs(f[idx]);
    peak = std::max(peak, a);
    const int i_last = static_cast<int>(idx % static_cast<std::size_t>(n));
    const int i_first = static_cast<int>(idx / static_cast<std::size_t>(n));
    const bool shell_point = grid.dimension() == 1 ? in_shell(i_last)
                                                   : (in_shell(i_last) || in_shell(i_first));
    if (shell_point) edge = std::max(edge, a);
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

NormReport compute_norms(const Field& u, const VectorField& grad,
                         const std::vector<double>& exponents, double time) {
  NormReport r;
  r.time = time;
  r.mean = mean(u);
  const Field gmag = grad.dimension() == 1 ? grad[0] : grad.magnitude();
  for (double e : exponents) {
    if (r.lp.count(e)) continue;
    r.lp[e] = lp_norm(u, e);
    r.grad[e] = lp_norm(gmag, e);
    r.w1p[e] = r.lp[e] + r.grad[e];
  }
  return r;
}

}  // namespace mbe
