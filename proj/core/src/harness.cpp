#include "mbe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "mbe/error.hpp"
#include "mbe/fit.hpp"
#include "mbe/spectral.hpp"

namespace mbe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool in_window(double t, FitWindow w) {
  return t >= w.t_min * (1.0 - 1e-12) && t <= w.t_max * (1.0 + 1e-12);
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

double FitWindow::decades() const { return std::log10(t_max / t_min); }

std::string to_string(TimeAxis a) { return a == TimeAxis::t ? "t" : "1+t"; }

DecayFit::DecayFit() : theoretical_slope(kNaN), margin(kNaN) {}

DecayFit fit_exponent(const NormSeries& series, const std::string& track, FitWindow window,
                      TimeAxis axis) {
  if (!(window.t_min > 0.0) || !(window.t_max > window.t_min)) {
    throw InvalidArgument("fit window needs 0 < t_min < t_max");
  }
  const std::vector<double>& values = series.column(track);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times()[i];
    if (!in_window(t, window)) continue;
    if (!(values[i] > 0.0)) {
      throw InvalidArgument("track " + track + " is not positive at t = " + std::to_string(t));
    }
    x.push_back(axis == TimeAxis::t ? t : 1.0 + t);
    y.push_back(values[i]);
  }
  if (x.size() < kMinFitSamples) {
    throw InvalidArgument("fit of " + track + " needs >= " + std::to_string(kMinFitSamples) +
                          " samples in the window, got " + std::to_string(x.size()));
  }
  const LineFit line = fit_log_log(x, y);
  DecayFit f;
  f.track = track;
  f.window = window;
  f.axis = axis;
  f.samples = x.size();
  f.slope = line.slope;
  f.intercept = line.intercept;
  f.residual = line.max_residual;
  return f;
}

void apply_slope_bound(DecayFit& fit, double theoretical, double tolerance) {
  fit.theoretical_slope = theoretical;
  fit.tolerance = tolerance;
  fit.margin = fit.threshold() - fit.slope;
  fit.pass = fit.slope <= fit.threshold();
}

// --------------------------------------------------------------------------- config

double ExperimentConfig::exponent_p() const { return model_exponent(model, grid.dimension()); }

FitWindow ExperimentConfig::fit_window() const {
  if (window) return *window;
  return {std::max(10.0 * solver.step, 0.05 * horizon), horizon};
}

double ExperimentConfig::interpolation_theta() const {
  return theta ? *theta : 1.0 - 1.0 / model.q();
}

void ExperimentConfig::validate() const {
  solver.validate();
  initial.validate();
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const double p = exponent_p();
  if (!(p >= 1.0)) throw InvalidArgument("p = d(q-1)/2 must be >= 1, got " + std::to_string(p));
  const FitWindow w = fit_window();
  if (w.t_min < 10.0 * solver.step * (1.0 - 1e-12)) {
    throw InvalidArgument("fit window must start at t >= 10 h");
  }
  if (!(w.t_max > w.t_min) || w.t_max > horizon * (1.0 + 1e-12)) {
    throw InvalidArgument("fit window must lie inside (0, horizon]");
  }
  const double th = interpolation_theta();
  if (!(th > 0.0) || !(th < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
}

void to_json(nlohmann::json& j, const FitWindow& w) {
  j = nlohmann::json{{"t_min", w.t_min}, {"t_max", w.t_max}};
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{
      {"grid", {{"d", c.grid.dimension()}, {"N", c.grid.points()}, {"L", c.grid.length()}}},
      {"current", c.model},
      {"initial", c.initial},
      {"horizon", c.horizon},
      {"solver", c.solver},
      {"output", c.output_dir},
      {"fit_window", c.fit_window()},
      {"theta", c.interpolation_theta()},
      {"p", c.exponent_p()}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid = GridSpec(g.value("d", c.grid.dimension()), g.value("N", c.grid.points()),
                      g.value("L", c.grid.length()));
  }
  if (j.contains("current")) c.model = current_from_json(j.at("current"));
  if (j.contains("initial")) c.initial = initial_data_from_json(j.at("initial"));
  c.horizon = j.value("horizon", c.horizon);
  if (j.contains("solver")) {
    nlohmann::json solver = c.solver;
    solver.merge_patch(j.at("solver"));
    c.solver = solver_config_from_json(solver);
  }
  c.output_dir = j.value("output", c.output_dir);
  if (j.contains("fit_window") && !j.at("fit_window").is_null()) {
    const auto& w = j.at("fit_window");
    c.window = FitWindow{w.at("t_min").get<double>(), w.at("t_max").get<double>()};
  }
  if (j.contains("theta") && !j.at("theta").is_null()) c.theta = j.at("theta").get<double>();
  c.validate();
  return c;
}

// --------------------------------------------------------------------------- gradient bounds

namespace {

BoundednessCheck bounded_in_window(const NormSeries& series, const std::string& track,
                                   double compensation, FitWindow window, double reference_until) {
  BoundednessCheck b;
  b.track = track;
  b.compensation = compensation;
  b.reference_until = reference_until;
  const std::vector<double>& v = series.column(track);
  bool have_reference = false;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times()[i];
    if (!in_window(t, window)) continue;
    const double c = std::pow(t, compensation) * v[i];
    if (t <= reference_until * (1.0 + 1e-12)) {
      b.reference = std::max(b.reference, c);
      have_reference = true;
    }
    if (c > b.peak) {
      b.peak = c;
      b.peak_time = t;
    }
  }
  if (!have_reference) throw InvalidArgument("no samples in the reference part of the window");
  b.ratio = b.reference > 0.0 ? b.peak / b.reference : (b.peak > 0.0 ? kNaN : 0.0);
  b.pass = b.reference > 0.0 ? b.peak <= b.limit * b.reference : b.peak == 0.0;
  return b;
}

}  // namespace

GradientBoundReport check_gradient_bounds(const NormSeries& series, double p, int dimension,
                                          FitWindow window) {
  if (!(p >= 1.0)) throw InvalidArgument("p must be >= 1");
  if (series.size() < 2) throw InvalidArgument("trajectory has fewer than two samples");
  GradientBoundReport r;
  r.p = p;
  r.dimension = dimension;
  r.window = window;
  const double e = dimension / (4.0 * p);
  const std::string inf_track = norm_column("grad", kInf);
  const std::string p_track = norm_column("grad", p);

  r.linf = bounded_in_window(series, inf_track, e, window,
                             window.t_min * std::pow(10.0, 0.1 * window.decades()));

  const double horizon = series.times().back();
  r.lp = bounded_in_window(series, p_track, 0.0, {0.0, horizon}, 0.1 * horizon);

  const auto& gi = series.column(inf_track);
  const auto& gp = series.column(p_track);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times()[i];
    const double comp = std::pow(t, e) * gi[i];
    r.M = std::max(r.M, gp[i] + comp);
    r.C1 = std::max(r.C1, comp);
    r.C2 = std::max(r.C2, gp[i]);
  }
  r.pass = r.linf.pass && r.lp.pass;
  return r;
}

GradientBoundReport check_gradient_bounds(const Trajectory& traj, double p, FitWindow window) {
  if (!traj.completed()) {
    throw InvalidArgument("trajectory did not complete (" + traj.meta.termination + ")");
  }
  return check_gradient_bounds(traj.norms, p, traj.grid.dimension(), window);
}

InterpolatedDecayReport check_interpolated_decay(const NormSeries& series, double p, int dimension,
                                                 double theta, FitWindow window) {
  if (!(theta > 0.0) || !(theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  InterpolatedDecayReport r;
  r.theta = theta;
  r.p_theta = p / (1.0 - theta);
  const std::string track = norm_column("grad", r.p_theta);
  if (!series.has(track)) {
    throw InvalidArgument("track " + track + " not recorded; add " + exponent_label(r.p_theta) +
                          " to the solver's extra exponents");
  }
  const double rate = dimension * theta / (4.0 * p);
  r.fit = fit_exponent(series, track, window, TimeAxis::t);
  apply_slope_bound(r.fit, -rate);
  r.compensated = bounded_in_window(series, track, rate, window,
                                    window.t_min * std::pow(10.0, 0.1 * window.decades()));
  r.pass = r.fit.pass || r.compensated.pass;
  return r;
}

GrowthReport check_growth(const NormSeries& series, double p, int dimension, FitWindow window) {
  if (window.decades() < kGrowthMinDecades - 1e-12) {
    throw InvalidArgument("growth window spans " + std::to_string(window.decades()) +
                          " decades; needs >= 1.5");
  }
  GrowthReport r;
  r.lp = fit_exponent(series, norm_column("u", p), window, TimeAxis::one_plus_t);
  apply_slope_bound(r.lp, 0.25);
  r.linf = fit_exponent(series, norm_column("u", kInf), window, TimeAxis::one_plus_t);
  apply_slope_bound(r.linf, 0.75 - dimension / (4.0 * p));
  r.pass = r.lp.pass && r.linf.pass;
  return r;
}

// --------------------------------------------------------------------------- coarsening

namespace {

using Rational = boost::rational<long long>;

Rational to_rational(double v) {
  for (long long den = 1; den <= 10000; ++den) {
    const double num = std::round(v * static_cast<double>(den));
    if (std::abs(num - v * static_cast<double>(den)) < 1e-9) {
      return Rational(static_cast<long long>(num), den);
    }
  }
  throw InvalidArgument("q = " + std::to_string(v) + " is not a simple rational");
}

std::string str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

}  // namespace

ExponentChain exponent_chain(double q, int dimension) {
  const Rational rq = to_rational(q);
  const Rational d(dimension);
  const Rational p = d * (rq - 1) / 2;
  if (p <= 0) throw InvalidArgument("exponent chain needs q > 1");
  const Rational theta = d * (1 / p - Rational(1, 2));
  const Rational bound = Rational(1, 4) - d / (4 * p) + d / 8;
  const Rational via_theta = (1 - theta) / 4;
  ExponentChain c;
  c.q = str(rq);
  c.p = str(p);
  c.theta = str(theta);
  c.bound = str(bound);
  c.bound_from_theta = str(via_theta);
  c.theta_consistent = bound == via_theta;
  if (dimension == 2) {
    const Rational remark = Rational(1, 2) - 1 / p;
    c.d2_remark = str(remark);
    c.d2_identity = bound == remark;
  }
  return c;
}

std::string ExponentChain::text() const {
  std::ostringstream os;
  os << "q = " << q << " -> p = d(q-1)/2 = " << p << " -> theta = d(1/p - 1/2) = " << theta
     << " -> bound 1/4 - d/(4p) + d/8 = " << bound << " [(1-theta)/4 = " << bound_from_theta
     << (theta_consistent ? ", equal]" : ", NOT equal]");
  if (d2_remark) {
    os << "; d=2: 1/2 - 1/p = " << *d2_remark << (*d2_identity ? " == " : " != ") << bound;
  }
  return os.str();
}

std::pair<double, double> coarsening_window(int dimension) {
  const double d = dimension;
  return {std::max(1.0 + 2.0 / d, (6.0 + d) / (2.0 + d)), 1.0 + 4.0 / d};
}

CoarsenessReport check_coarseness(const NormSeries& series, double q, int dimension,
                                  FitWindow window) {
  const auto [lo, hi] = coarsening_window(dimension);
  if (!(q > lo) || !(q < hi)) {
    throw InvalidArgument("q = " + std::to_string(q) + " outside the coarsening window (" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  CoarsenessReport r;
  r.q = q;
  r.dimension = dimension;
  r.p = dimension * (q - 1.0) / 2.0;
  r.chain = exponent_chain(q, dimension);
  r.fit = fit_exponent(series, "coarseness", window, TimeAxis::one_plus_t);
  apply_slope_bound(r.fit, 0.25 - dimension / (4.0 * r.p) + dimension / 8.0);
  if (dimension == 2) r.d2_remark_slope = 0.5 - 1.0 / r.p;
  r.pass = r.fit.pass;
  return r;
}

// --------------------------------------------------------------------------- scan

ScanReport amplitude_scan(const ExperimentConfig& tmpl, const std::vector<double>& amplitudes,
                          unsigned workers) {
  if (amplitudes.size() < 3) throw InvalidArgument("amplitude scan needs >= 3 amplitudes");
  for (std::size_t i = 1; i < amplitudes.size(); ++i) {
    if (amplitudes[i] < amplitudes[i - 1]) throw InvalidArgument("amplitudes must be increasing");
  }
  tmpl.validate();
  const double p = tmpl.exponent_p();
  const FitWindow window = tmpl.fit_window();

  ScanReport report;
  report.entries.resize(amplitudes.size());
  auto run = [&](std::size_t i) {
    ScanEntry& e = report.entries[i];
    e.amplitude = amplitudes[i];
    InitialDataSpec spec = tmpl.initial;
    spec.amplitude = amplitudes[i];
    const Field u0 = make_initial_data(spec, tmpl.grid);
    e.initial_gradient_lp = lp_norm(spectral_gradient(u0), p);
    const Trajectory traj = solve(u0, tmpl.horizon, tmpl.model, tmpl.solver);
    e.termination = traj.meta.termination;
    if (traj.completed()) {
      const GradientBoundReport g = check_gradient_bounds(traj.norms, p, tmpl.grid.dimension(), window);
      e.pass = g.pass;
      e.M = g.M;
    } else {
      e.M = kNaN;
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(amplitudes.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(amplitudes.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < amplitudes.size(); i = next++) {
      try {
        run(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  bool seen_fail = false;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    if (report.entries[i].pass) {
      report.largest_pass = i;
      if (seen_fail) report.monotone = false;
    } else if (!seen_fail) {
      seen_fail = true;
      report.smallest_fail = i;
    }
  }
  return report;
}

// --------------------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const DecayFit& f) {
  j = nlohmann::json{{"track", f.track},
                     {"window", f.window},
                     {"axis", to_string(f.axis)},
                     {"samples", f.samples},
                     {"slope", f.slope},
                     {"intercept", f.intercept},
                     {"residual", f.residual},
                     {"theoretical_slope", number(f.theoretical_slope)},
                     {"tolerance", f.tolerance},
                     {"threshold", number(f.threshold())},
                     {"margin", number(f.margin)},
                     {"verdict", f.pass ? "PASS" : "FAIL"}};
}

void to_json(nlohmann::json& j, const BoundednessCheck& b) {
  j = nlohmann::json{{"track", b.track},
                     {"compensation", b.compensation},
                     {"reference", b.reference},
                     {"reference_until", b.reference_until},
                     {"peak", b.peak},
                     {"peak_time", b.peak_time},
                     {"limit", b.limit},
                     {"ratio", number(b.ratio)},
                     {"margin", number(b.limit - b.ratio)},
                     {"verdict", b.pass ? "PASS" : "FAIL"}};
}

void to_json(nlohmann::json& j, const GradientBoundReport& r) {
  j = nlohmann::json{{"p", r.p},   {"d", r.dimension}, {"window", r.window}, {"linf", r.linf},
                     {"lp", r.lp}, {"M", r.M},         {"C1", r.C1},         {"C2", r.C2},
                     {"verdict", r.pass ? "PASS" : "FAIL"}};
}

void to_json(nlohmann::json& j, const InterpolatedDecayReport& r) {
  j = nlohmann::json{{"theta", r.theta},
                     {"p_theta", r.p_theta},
                     {"fit", r.fit},
                     {"compensated", r.compensated},
                     {"verdict", r.pass ? "PASS" : "FAIL"}};
}

void to_json(nlohmann::json& j, const GrowthReport& r) {
  j = nlohmann::json{{"lp", r.lp}, {"linf", r.linf}, {"verdict", r.pass ? "PASS" : "FAIL"}};
}

void to_json(nlohmann::json& j, const ExponentChain& c) {
  j = nlohmann::json{{"q", c.q},
                     {"p", c.p},
                     {"theta", c.theta},
                     {"bound", c.bound},
                     {"bound_from_theta", c.bound_from_theta},
                     {"theta_consistent", c.theta_consistent},
                     {"text", c.text()}};
  if (c.d2_remark) {
    j["d2_remark"] = *c.d2_remark;
    j["d2_identity"] = *c.d2_identity;
  }
}

void to_json(nlohmann::json& j, const CoarsenessReport& r) {
  j = nlohmann::json{{"q", r.q},         {"p", r.p},
                     {"d", r.dimension}, {"fit", r.fit},
                     {"chain", r.chain}, {"verdict", r.pass ? "PASS" : "FAIL"}};
  if (r.d2_remark_slope) j["d2_remark_slope"] = *r.d2_remark_slope;
}

void to_json(nlohmann::json& j, const ScanEntry& e) {
  j = nlohmann::json{{"amplitude", e.amplitude},
                     {"initial_gradient_lp", e.initial_gradient_lp},
                     {"termination", e.termination},
                     {"M", number(e.M)},
                     {"verdict", e.pass ? "PASS" : "FAIL"}};
}

void to_json(nlohmann::json& j, const ScanReport& r) {
  j = nlohmann::json{{"entries", r.entries}, {"monotone", r.monotone}};
  if (r.largest_pass) {
    j["largest_pass"] = r.entries[*r.largest_pass].amplitude;
    j["epsilon0_lower"] = r.entries[*r.largest_pass].initial_gradient_lp;
  }
  if (r.smallest_fail) {
    j["smallest_fail"] = r.entries[*r.smallest_fail].amplitude;
    j["epsilon0_upper"] = r.entries[*r.smallest_fail].initial_gradient_lp;
  }
}

}  // namespace mbe
