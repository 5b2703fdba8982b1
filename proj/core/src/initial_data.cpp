#include "mbe/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "mbe/error.hpp"
#include "mbe/spectral.hpp"

namespace mbe {

std::string to_string(InitialFamily f) {
  switch (f) {
    case InitialFamily::gaussian_bump: return "gaussian_bump";
    case InitialFamily::random_band: return "random_band";
    case InitialFamily::multibump: return "multibump";
  }
  return "gaussian_bump";
}

InitialFamily initial_family_from_string(const std::string& s) {
  if (s == "gaussian_bump") return InitialFamily::gaussian_bump;
  if (s == "random_band") return InitialFamily::random_band;
  if (s == "multibump") return InitialFamily::multibump;
  throw InvalidArgument("unknown initial data family '" + s + "'");
}

void InitialDataSpec::validate() const {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("initial amplitude must be positive");
  }
  if (!(width >= 0.0) || !std::isfinite(width)) throw InvalidArgument("width must be >= 0");
}

void to_json(nlohmann::json& j, const InitialDataSpec& s) {
  j = nlohmann::json{{"family", to_string(s.family)},
                     {"amplitude", s.amplitude},
                     {"seed", s.seed},
                     {"width", s.width}};
}

InitialDataSpec initial_data_from_json(const nlohmann::json& j) {
  InitialDataSpec s;
  if (j.contains("family")) s.family = initial_family_from_string(j.at("family").get<std::string>());
  s.amplitude = j.value("amplitude", s.amplitude);
  s.seed = j.value("seed", s.seed);
  s.width = j.value("width", s.width);
  s.validate();
  return s;
}

namespace {

using Point = std::array<double, 2>;

// Offsets from the box centre for every sample, row-major.
std::vector<Point> offsets(const GridSpec& grid) {
  const int n = grid.points();
  const double c = 0.5 * grid.length();
  const double dx = grid.spacing();
  std::vector<Point> out;
  out.reserve(grid.size());
  if (grid.dimension() == 1) {
    for (int i = 0; i < n; ++i) out.push_back({i * dx - c, 0.0});
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.push_back({i * dx - c, j * dx - c});
    }
  }
  return out;
}

double mexican_hat(const Point& x, const Point& centre, double s, int d) {
  const double dx = x[0] - centre[0];
  const double dy = x[1] - centre[1];
  const double r2 = dx * dx + dy * dy;
  return (1.0 - r2 / (d * s * s)) * std::exp(-r2 / (2.0 * s * s));
}

double gaussian(const Point& x, double s) {
  return std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * s * s));
}

}  // namespace

Field make_initial_data(const InitialDataSpec& spec, const GridSpec& grid) {
  spec.validate();
  const int d = grid.dimension();
  const double s = spec.width > 0.0 ? spec.width : grid.length() / 32.0;
  const std::vector<Point> x = offsets(grid);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Field u(grid);

  switch (spec.family) {
    case InitialFamily::gaussian_bump:
      for (std::size_t i = 0; i < x.size(); ++i) u[i] = mexican_hat(x[i], {0.0, 0.0}, s, d);
      break;
    case InitialFamily::random_band: {
      struct Wave {
        Point k;
        double phase;
        double weight;
      };
      std::vector<Wave> waves(6);
      for (Wave& w : waves) {
        const double mag = (0.5 + unit(rng)) / s;
        const double angle = d == 1 ? 0.0 : 2.0 * std::numbers::pi * unit(rng);
        w.k = {mag * std::cos(angle), d == 1 ? 0.0 : mag * std::sin(angle)};
        w.phase = 2.0 * std::numbers::pi * unit(rng);
        w.weight = 0.5 + unit(rng);
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        double carrier = 0.0;
        for (const Wave& w : waves) {
          carrier += w.weight * std::cos(w.k[0] * x[i][0] + w.k[1] * x[i][1] + w.phase);
        }
        u[i] = carrier * gaussian(x[i], s);
      }
      break;
    }
    case InitialFamily::multibump: {
      for (int b = 0; b < 4; ++b) {
        const double radius = 1.5 * s * unit(rng);
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        const Point centre = {radius * std::cos(angle), d == 1 ? 0.0 : radius * std::sin(angle)};
        const double weight = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 0.5 * unit(rng));
        for (std::size_t i = 0; i < x.size(); ++i) {
          u[i] += weight * mexican_hat(x[i], centre, 0.5 * s, d);
        }
      }
      break;
    }
  }

  // Remove the mean with a unit-mass window so the support stays central.
  double mass = 0.0;
  double window_mass = 0.0;
  std::vector<double> window(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    window[i] = gaussian(x[i], s);
    mass += u[i];
    window_mass += window[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) u[i] -= mass / window_mass * window[i];

  const double slope = lp_norm(spectral_gradient(u), kInf);
  if (!(slope > 0.0)) throw InvalidArgument("initial profile is flat");
  u *= spec.amplitude / slope;
  return u;
}

double outside_central_half(const Field& u) {
  const GridSpec& grid = u.grid();
  const int n = grid.points();
  auto central = [n](int i) { return i >= n / 4 && i < 3 * n / 4; };
  double peak = 0.0;
  double outside = 0.0;
  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    const int i = grid.dimension() == 1 ? static_cast<int>(idx) : static_cast<int>(idx) / n;
    const int j = grid.dimension() == 1 ? n / 2 : static_cast<int>(idx) % n;
    const double v = std::abs(u[idx]);
    peak = std::max(peak, v);
    if (!central(i) || !central(j)) outside = std::max(outside, v);
  }
  return peak > 0.0 ? outside / peak : 0.0;
}

}  // namespace mbe
