#include "mbe/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "mbe/error.hpp"
#include "mbe/fft.hpp"
#include "mbe/semigroup.hpp"
#include "mbe/spectral.hpp"

namespace mbe {

std::string to_string(Scheme s) { return s == Scheme::etd2 ? "etd2" : "picard_duhamel"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "etd2") return Scheme::etd2;
  if (s == "picard_duhamel" || s == "picard") return Scheme::picard_duhamel;
  throw InvalidArgument("unknown scheme '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("solver step must be positive");
  if (nodes < 2) throw InvalidArgument("solver needs at least 2 quadrature nodes per step");
  if (!(picard_tolerance > 0.0)) throw InvalidArgument("Picard tolerance must be positive");
  if (picard_max_iterations < 1) throw InvalidArgument("Picard iteration cap must be >= 1");
  if (snapshot_stride < 0) throw InvalidArgument("snapshot stride must be >= 0");
  if (!(blowup_factor > 1.0)) throw InvalidArgument("blow-up factor must exceed 1");
  for (double e : extra_exponents) {
    if (!(e >= 1.0)) throw InvalidArgument("tracked exponents must be >= 1");
  }
}

void to_json(nlohmann::json& j, const SolverConfig& c) {
  nlohmann::json extras = nlohmann::json::array();
  for (double e : c.extra_exponents) {
    extras.push_back(e == kInf ? nlohmann::json("inf") : nlohmann::json(e));
  }
  j = nlohmann::json{{"scheme", to_string(c.scheme)},
                     {"step", c.step},
                     {"nodes", c.nodes},
                     {"picard_tolerance", c.picard_tolerance},
                     {"picard_max_iterations", c.picard_max_iterations},
                     {"dealias", c.dealias},
                     {"snapshot_stride", c.snapshot_stride},
                     {"blowup_factor", c.blowup_factor},
                     {"extra_exponents", extras}};
}

SolverConfig solver_config_from_json(const nlohmann::json& j) {
  SolverConfig c;
  c.scheme = scheme_from_string(j.value("scheme", to_string(c.scheme)));
  c.step = j.value("step", c.step);
  c.nodes = j.value("nodes", c.nodes);
  c.picard_tolerance = j.value("picard_tolerance", c.picard_tolerance);
  c.picard_max_iterations = j.value("picard_max_iterations", c.picard_max_iterations);
  c.dealias = j.value("dealias", c.dealias);
  c.snapshot_stride = j.value("snapshot_stride", c.snapshot_stride);
  c.blowup_factor = j.value("blowup_factor", c.blowup_factor);
  if (j.contains("extra_exponents")) {
    for (const auto& e : j.at("extra_exponents")) {
      c.extra_exponents.push_back(e.is_string() && e.get<std::string>() == "inf" ? kInf
                                                                                  : e.get<double>());
    }
  }
  c.validate();
  return c;
}

double w1p_cap_w1inf(const Field& u, double p) {
  const VectorField g = spectral_gradient(u);
  return w1p_norm(u, g, p) + w1p_norm(u, g, kInf);
}

namespace {

double distance_norm(const Spectrum& diff, double p) {
  const Field d = inverse(diff);
  const VectorField g = spectral_gradient(diff);
  return w1p_norm(d, g, p) + w1p_norm(d, g, kInf);
}

double norm_of(const Spectrum& s, double p) { return distance_norm(s, p); }

// Precomputed weights for a fixed (grid, model, step, nodes).
class Integrator {
 public:
  Integrator(const GridSpec& grid, const CurrentModel& model, const SolverConfig& cfg, double h,
             double p)
      : grid_(grid), model_(model), cfg_(cfg), h_(h), p_(p) {
    const int m = cfg.nodes;
    tau_ = h / (m - 1);
    propagators_.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      // The last node uses h itself so a vanishing current reproduces exp(-h|k|^4) exactly.
      const double t = j == m - 1 ? h : j * tau_;
      propagators_.push_back(&cached_multiplier(grid, t, MultiplierKind::semigroup));
    }
    const Multiplier& sub_phi1 = cached_multiplier(grid, tau_, MultiplierKind::phi1);
    sub_weight_.resize(sub_phi1.weights.size());
    for (std::size_t i = 0; i < sub_weight_.size(); ++i) sub_weight_[i] = 0.5 * tau_ * sub_phi1.weights[i];

    const Multiplier& phi1_h = cached_multiplier(grid, h, MultiplierKind::phi1);
    const Multiplier& phi2_h = cached_multiplier(grid, h, MultiplierKind::phi2);
    h_phi1_.resize(phi1_h.weights.size());
    h_phi2_.resize(phi2_h.weights.size());
    for (std::size_t i = 0; i < h_phi1_.size(); ++i) {
      h_phi1_[i] = h * phi1_h.weights[i];
      h_phi2_[i] = h * phi2_h.weights[i];
    }
  }

  double step_size() const noexcept { return h_; }
  int nodes() const noexcept { return cfg_.nodes; }

  /// Dealiased spectrum of div J(grad u).
  Spectrum nonlinear(const Spectrum& u, double time) const {
    if (model_.is_zero()) return Spectrum(grid_);
    const VectorField grad = spectral_gradient(u);
    for (int a = 0; a < grid_.dimension(); ++a) {
      if (!grad[a].all_finite()) throw BlowUp("non-finite gradient at t = " + std::to_string(time), time);
    }
    VectorField current(grid_);
    try {
      current = evaluate_current(model_, grad);
    } catch (const BlowUp& e) {
      throw BlowUp(std::string(e.what()) + " at t = " + std::to_string(time), time);
    }
    Spectrum div = spectral_divergence_hat(current);
    return cfg_.dealias ? dealias(std::move(div)) : div;
  }

  Spectrum etd2(const Spectrum& u, double time) const {
    const Spectrum nu = nonlinear(u, time);
    Spectrum a = apply(*propagators_.back(), u);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= h_phi1_[i] * nu[i];
    const Spectrum na = nonlinear(a, time + h_);
    Spectrum out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= h_phi2_[i] * (na[i] - nu[i]);
    return out;
  }

  /// Node states driven by the node currents nl[0..M-1].
  std::vector<Spectrum> sweep(const Spectrum& u, const std::vector<Spectrum>& nl) const {
    const int m = cfg_.nodes;
    std::vector<Spectrum> forcing;
    forcing.reserve(static_cast<std::size_t>(m - 1));
    for (int i = 0; i + 1 < m; ++i) {
      Spectrum f(grid_);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] = sub_weight_[k] * (nl[i][k] + nl[i + 1][k]);
      forcing.push_back(std::move(f));
    }
    std::vector<Spectrum> states;
    states.reserve(static_cast<std::size_t>(m));
    states.push_back(u);
    for (int j = 1; j < m; ++j) {
      Spectrum acc(grid_);
      for (int i = 0; i < j; ++i) {
        const Multiplier& e = *propagators_[static_cast<std::size_t>(j - 1 - i)];
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += e.weights[k] * forcing[i][k];
      }
      Spectrum s = apply(*propagators_[static_cast<std::size_t>(j)], u);
      s -= acc;
      states.push_back(std::move(s));
    }
    return states;
  }

  std::vector<Spectrum> free_states(const Spectrum& u) const {
    std::vector<Spectrum> states;
    for (const Multiplier* e : propagators_) states.push_back(apply(*e, u));
    return states;
  }

  double max_distance(const std::vector<Spectrum>& a, const std::vector<Spectrum>& b) const {
    double worst = 0.0;
    for (std::size_t j = 1; j < a.size(); ++j) {
      Spectrum diff = a[j];
      diff -= b[j];
      const double dj = distance_norm(diff, p_);
      if (!std::isfinite(dj)) return dj;
      worst = std::max(worst, dj);
    }
    return worst;
  }

  Spectrum picard(const Spectrum& u, double time, StepStats* stats) const {
    const int m = cfg_.nodes;
    std::vector<Spectrum> nl;
    nl.reserve(static_cast<std::size_t>(m));
    nl.push_back(nonlinear(u, time));
    for (int j = 1; j < m; ++j) nl.push_back(Spectrum(grid_));

    std::vector<Spectrum> states = free_states(u);
    double last_ratio = std::numeric_limits<double>::quiet_NaN();
    double prev = 0.0;
    for (int it = 1; it <= cfg_.picard_max_iterations; ++it) {
      for (int j = 1; j < m; ++j) nl[j] = nonlinear(states[j], time + j * tau_);
      std::vector<Spectrum> next = sweep(u, nl);
      const double diff = max_distance(next, states);
      if (!std::isfinite(diff)) throw BlowUp("non-finite Picard iterate at t = " + std::to_string(time), time);
      if (it > 1) last_ratio = prev > 0.0 ? diff / prev : 0.0;
      if (stats) {
        stats->iterations = it;
        stats->differences.push_back(diff);
        if (it > 1) stats->ratios.push_back(last_ratio);
      }
      states = std::move(next);
      if (diff < cfg_.picard_tolerance) return std::move(states.back());
      prev = diff;
    }
    throw StepSizeTooLarge("Picard iteration did not converge within " +
                               std::to_string(cfg_.picard_max_iterations) +
                               " sweeps at t = " + std::to_string(time) +
                               " (last contraction ratio " + std::to_string(last_ratio) + ")",
                           last_ratio);
  }

  Spectrum step(const Spectrum& u, double time, StepStats* stats) const {
    return cfg_.scheme == Scheme::etd2 ? etd2(u, time) : picard(u, time, stats);
  }

 private:
  GridSpec grid_;
  const CurrentModel& model_;
  const SolverConfig& cfg_;
  double h_;
  double p_;
  double tau_ = 0.0;
  std::vector<const Multiplier*> propagators_;
  std::vector<double> sub_weight_;
  std::vector<double> h_phi1_;
  std::vector<double> h_phi2_;
};

double norm_exponent(const CurrentModel& model, int dimension) {
  const double p = model_exponent(model, dimension);
  if (!(p >= 1.0)) {
    throw InvalidArgument("p = d(q-1)/2 = " + std::to_string(p) + " < 1 for q = " +
                          std::to_string(model.q()) + ", d = " + std::to_string(dimension));
  }
  return p;
}

void require_step_input(const Field& u, double h, const SolverConfig& cfg) {
  cfg.validate();
  if (!(h > 0.0)) throw InvalidArgument("step must be positive");
  u.require_finite("step input");
  const double tail = spectral_tail_fraction(forward(u));
  if (tail >= kTailGuard) {
    throw Unresolved("step input is under-resolved: spectral tail fraction " + std::to_string(tail),
                     tail);
  }
}

}  // namespace

Field picard_step(const Field& u, double h, const CurrentModel& model, const SolverConfig& cfg,
                  StepStats* stats) {
  require_step_input(u, h, cfg);
  const double p = norm_exponent(model, u.grid().dimension());
  Integrator integ(u.grid(), model, cfg, h, p);
  return inverse(integ.picard(forward(u), 0.0, stats));
}

Field etd2_step(const Field& u, double h, const CurrentModel& model, const SolverConfig& cfg) {
  require_step_input(u, h, cfg);
  const double p = norm_exponent(model, u.grid().dimension());
  Integrator integ(u.grid(), model, cfg, h, p);
  return inverse(integ.etd2(forward(u), 0.0));
}

std::vector<double> tracked_exponents(const CurrentModel& model, int dimension,
                                      const SolverConfig& cfg) {
  const double p = norm_exponent(model, dimension);
  std::vector<double> e{1.0, p, 2.0, p * model.q(), kInf};
  e.insert(e.end(), cfg.extra_exponents.begin(), cfg.extra_exponents.end());
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

namespace {

std::vector<std::string> column_names(const std::vector<double>& exponents) {
  std::vector<std::string> names;
  for (double e : exponents) {
    names.push_back(norm_column("u", e));
    names.push_back(norm_column("grad", e));
    names.push_back(norm_column("W1", e));
  }
  names.insert(names.end(), {"W1p_cap_W1inf", "mean", "coarseness", "coarseness_rms"});
  return names;
}

std::vector<double> norm_row(const Field& u, const VectorField& grad,
                             const std::vector<double>& exponents, double p) {
  const NormReport r = compute_norms(u, grad, exponents, 0.0);
  std::vector<double> row;
  for (double e : exponents) {
    row.push_back(r.lp.at(e));
    row.push_back(r.grad.at(e));
    row.push_back(r.w1p.at(e));
  }
  row.push_back(r.w1p.at(p) + r.w1p.at(kInf));
  row.push_back(r.mean);
  double ss = 0.0;
  for (double v : u.samples()) ss += (v - r.mean) * (v - r.mean);
  const double coarse = std::sqrt(ss * u.grid().cell_volume());
  row.push_back(coarse);
  row.push_back(coarse / std::sqrt(u.grid().volume()));
  return row;
}

}  // namespace

Trajectory solve(const Field& u0, double horizon, const CurrentModel& model,
                 const SolverConfig& cfg) {
  cfg.validate();
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  u0.require_finite("solve initial data");
  const double h = cfg.step;
  const long steps = std::lround(horizon / h);
  if (steps < 1 || std::abs(static_cast<double>(steps) * h - horizon) > 1e-9 * horizon) {
    throw InvalidArgument("horizon must be a whole number of steps");
  }
  const GridSpec& grid = u0.grid();
  const double p = norm_exponent(model, grid.dimension());
  const std::vector<double> exponents = tracked_exponents(model, grid.dimension(), cfg);
  const auto started = std::chrono::steady_clock::now();

  Trajectory traj{grid, {}, {}, NormSeries(column_names(exponents)), {}};
  traj.meta.exponent_p = p;
  traj.meta.q = model.q();

  Integrator integ(grid, model, cfg, h, p);
  Spectrum uhat = forward(u0);

  auto record = [&](double t, const Field& u, const VectorField& grad) {
    traj.times.push_back(t);
    traj.norms.append(t, norm_row(u, grad, exponents, p));
    const double shell = boundary_shell_ratio(u);
    traj.meta.max_boundary_ratio = std::max(traj.meta.max_boundary_ratio, shell);
    const double tail = spectral_tail_fraction(uhat);
    traj.meta.max_tail_fraction = std::max(traj.meta.max_tail_fraction, tail);
  };

  {
    const VectorField g0 = spectral_gradient(uhat);
    record(0.0, u0, g0);
    traj.meta.ceiling = cfg.blowup_factor * (lp_norm(u0, kInf) + lp_norm(g0, kInf));
  }
  traj.snapshots.push_back({0.0, u0});
  const auto& mean_track = traj.norms.column("mean");
  const double mean0 = mean_track.front();

  bool last_stored = true;
  for (long n = 1; n <= steps; ++n) {
    const double t0 = static_cast<double>(n - 1) * h;
    const double t = static_cast<double>(n) * h;
    StepStats stats;
    try {
      uhat = integ.step(uhat, t0, &stats);
    } catch (const BlowUp& e) {
      traj.meta.termination = "blow_up";
      traj.meta.message = e.what();
      break;
    } catch (const StepSizeTooLarge& e) {
      traj.meta.termination = "step_size";
      traj.meta.message = e.what();
      break;
    }
    traj.meta.max_picard_iterations = std::max(traj.meta.max_picard_iterations, stats.iterations);
    for (double r : stats.ratios) {
      traj.meta.max_contraction_ratio = std::max(traj.meta.max_contraction_ratio, r);
    }

    Field u = inverse(uhat);
    if (!u.all_finite()) {
      traj.meta.termination = "blow_up";
      traj.meta.message = "non-finite field at t = " + std::to_string(t);
      break;
    }
    const VectorField grad = spectral_gradient(uhat);
    record(t, u, grad);
    traj.meta.mean_drift = std::max(traj.meta.mean_drift, std::abs(mean_track.back() - mean0));

    last_stored = cfg.snapshot_stride > 0 && n % cfg.snapshot_stride == 0;
    const bool over = lp_norm(u, kInf) + lp_norm(grad, kInf) > traj.meta.ceiling;
    if (last_stored || n == steps || over) {
      traj.snapshots.push_back({t, std::move(u)});
      last_stored = true;
    }
    if (over) {
      traj.meta.termination = "ceiling";
      traj.meta.message = "W^{1,inf} norm exceeded the blow-up ceiling at t = " + std::to_string(t);
      break;
    }
  }
  if (!last_stored) traj.snapshots.push_back({traj.times.back(), inverse(uhat)});

  traj.meta.end_time = traj.times.back();
  traj.meta.boundary_warning = traj.meta.max_boundary_ratio > kBoundaryGuard;
  traj.meta.tail_warning = traj.meta.max_tail_fraction > kTailGuard;
  traj.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return traj;
}

void to_json(nlohmann::json& j, const TrajectoryMeta& m) {
  j = nlohmann::json{{"termination", m.termination},
                     {"message", m.message},
                     {"end_time", m.end_time},
                     {"p", m.exponent_p},
                     {"q", m.q},
                     {"ceiling", m.ceiling},
                     {"max_boundary_ratio", m.max_boundary_ratio},
                     {"boundary_warning", m.boundary_warning},
                     {"max_tail_fraction", m.max_tail_fraction},
                     {"tail_warning", m.tail_warning},
                     {"mean_drift", m.mean_drift},
                     {"max_picard_iterations", m.max_picard_iterations},
                     {"max_contraction_ratio", m.max_contraction_ratio},
                     {"wall_seconds", m.wall_seconds}};
}

IterationStudy iteration_study(const Field& u0, double delta, int n_max, const CurrentModel& model,
                               const SolverConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0)) throw InvalidArgument("iteration interval must be positive");
  if (n_max < 3) throw InvalidArgument("iteration study needs n_max >= 3");
  u0.require_finite("iteration study initial data");
  const GridSpec& grid = u0.grid();
  const double p = norm_exponent(model, grid.dimension());
  Integrator integ(grid, model, cfg, delta, p);
  const Spectrum uhat = forward(u0);

  IterationStudy s;
  s.interval = delta;
  s.nodes = cfg.nodes;
  s.initial_norm = norm_of(uhat, p);
  if (!(s.initial_norm > 0.0)) throw InvalidArgument("iteration study needs non-zero data");

  const VectorField g0 = spectral_gradient(uhat);
  const double w1p0 = w1p_norm(u0, g0, p);

  std::vector<Spectrum> states = integ.free_states(uhat);
  for (const Spectrum& st : states) {
    const Field f = inverse(st);
    s.free_evolution_margin =
        std::max(s.free_evolution_margin, w1p_norm(f, spectral_gradient(st), p) / w1p0);
    s.doubling_margin = std::max(s.doubling_margin, norm_of(st, p) / s.initial_norm);
  }

  for (int n = 1; n <= n_max; ++n) {
    std::vector<Spectrum> nl;
    nl.reserve(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
      nl.push_back(integ.nonlinear(states[j], delta * static_cast<double>(j) / (cfg.nodes - 1)));
    }
    std::vector<Spectrum> next = integ.sweep(uhat, nl);
    const double diff = integ.max_distance(next, states);
    if (!std::isfinite(diff)) {
      throw InvalidArgument("iterate " + std::to_string(n) + " is non-finite");
    }
    s.differences.push_back(diff);
    if (n > 1) s.ratios.push_back(s.differences[n - 2] > 0.0 ? diff / s.differences[n - 2] : 0.0);
    for (const Spectrum& st : next) s.doubling_margin = std::max(s.doubling_margin, norm_of(st, p) / s.initial_norm);
    states = std::move(next);
  }
  return s;
}

void to_json(nlohmann::json& j, const IterationStudy& s) {
  j = nlohmann::json{{"interval", s.interval},
                     {"nodes", s.nodes},
                     {"initial_norm", s.initial_norm},
                     {"differences", s.differences},
                     {"ratios", s.ratios},
                     {"doubling_margin", s.doubling_margin},
                     {"free_evolution_margin", s.free_evolution_margin}};
}

ContinuityReport continuity_study(const Field& u0, const Field& direction, double epsilon,
                                  double delta, const CurrentModel& model, const SolverConfig& cfg) {
  if (!(epsilon > 0.0)) throw InvalidArgument("perturbation size must be positive");
  const double p = norm_exponent(model, u0.grid().dimension());
  const double dnorm = w1p_cap_w1inf(direction, p);
  if (!(dnorm > 0.0)) throw InvalidArgument("perturbation direction must be non-zero");
  Field v0 = u0;
  for (std::size_t i = 0; i < v0.size(); ++i) v0[i] += epsilon * direction[i] / dnorm;

  SolverConfig c = cfg;
  c.snapshot_stride = 1;
  const Trajectory a = solve(u0, delta, model, c);
  const Trajectory b = solve(v0, delta, model, c);
  if (!a.completed() || !b.completed()) throw Error("continuity run did not complete");

  ContinuityReport r;
  const double initial = w1p_cap_w1inf(u0 - v0, p);
  r.epsilon = initial;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    r.sup_difference = std::max(r.sup_difference, w1p_cap_w1inf(a.snapshots[k].field - b.snapshots[k].field, p));
  }
  r.constant = r.sup_difference / initial;
  return r;
}

}  // namespace mbe
