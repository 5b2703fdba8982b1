#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbe/currents.hpp"
#include "mbe/grid.hpp"
#include "mbe/initial_data.hpp"
#include "mbe/norm_series.hpp"
#include "mbe/solver.hpp"

namespace mbe {

struct FitWindow {
  double t_min = 0.0;
  double t_max = 0.0;

  double decades() const;
};

/// Decay tracks are fitted against t, growth tracks against 1 + t.
enum class TimeAxis { t, one_plus_t };

std::string to_string(TimeAxis a);

struct DecayFit {
  std::string track;
  FitWindow window;
  TimeAxis axis = TimeAxis::t;
  std::size_t samples = 0;
  double slope = 0.0;
  double intercept = 0.0;
  /// Largest |log deviation| from the fitted line.
  double residual = 0.0;
  /// Bound on the slope (theoretical + tolerance); NaN when no bound applies.
  double theoretical_slope;
  double tolerance = 0.0;
  /// threshold - slope, positive when the slope is inside the bound.
  double margin;
  bool pass = false;

  DecayFit();
  double threshold() const { return theoretical_slope + tolerance; }
};

inline constexpr std::size_t kMinFitSamples = 20;
inline constexpr double kBoundedFactor = 1.1;
inline constexpr double kSlopeTolerance = 0.05;

/// Least squares of log(value) against log(t) or log(1 + t) over the window.
/// Needs >= 20 samples in the window, all positive.
DecayFit fit_exponent(const NormSeries& series, const std::string& track, FitWindow window,
                      TimeAxis axis = TimeAxis::t);

/// Sets the bound, margin and verdict of a fit: pass iff slope <= theoretical + tolerance.
void apply_slope_bound(DecayFit& fit, double theoretical, double tolerance = kSlopeTolerance);

/// Solver defaults for experiments: etd2 with h = 0.01.
inline SolverConfig experiment_solver_defaults() {
  SolverConfig s;
  s.step = 0.01;
  return s;
}

struct ExperimentConfig {
  GridSpec grid{2, 128, 20.0};
  CurrentModel model = CurrentModel::power_law(3.0);
  InitialDataSpec initial;
  double horizon = 10.0;
  SolverConfig solver = experiment_solver_defaults();
  std::string output_dir = "runs/default";
  /// Defaults to [max(10 h, 0.05 T), T].
  std::optional<FitWindow> window;
  /// Interpolation parameter for the interpolated decay check; defaults to 1 - 1/q.
  std::optional<double> theta;

  double exponent_p() const;
  FitWindow fit_window() const;
  double interpolation_theta() const;
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Missing fields take their defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Boundedness of a track by kBoundedFactor times a reference value.
struct BoundednessCheck {
  std::string track;
  /// Power of t multiplying the track (0 for an uncompensated track).
  double compensation = 0.0;
  double reference = 0.0;
  double reference_until = 0.0;
  double peak = 0.0;
  double peak_time = 0.0;
  double limit = kBoundedFactor;
  /// peak / reference.
  double ratio = 0.0;
  bool pass = false;
};

struct GradientBoundReport {
  double p = 0.0;
  int dimension = 0;
  FitWindow window;
  /// t^{d/(4p)} ||grad u||_inf over the window, against its maximum over the
  /// first tenth (in log t) of the window.
  BoundednessCheck linf;
  /// ||grad u||_p over the run, against its running maximum over the first 10% of the horizon.
  BoundednessCheck lp;
  /// sup_t ||grad u||_p + t^{d/(4p)} ||grad u||_inf.
  double M = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  bool pass = false;
};

GradientBoundReport check_gradient_bounds(const NormSeries& series, double p, int dimension,
                                          FitWindow window);
/// Rejects trajectories that did not complete.
GradientBoundReport check_gradient_bounds(const Trajectory& traj, double p, FitWindow window);

struct InterpolatedDecayReport {
  double theta = 0.0;
  double p_theta = 0.0;
  DecayFit fit;
  BoundednessCheck compensated;
  bool pass = false;
};

/// Decay of ||grad u||_{p_theta}, 1/p_theta = (1 - theta)/p, against -d theta/(4p).
InterpolatedDecayReport check_interpolated_decay(const NormSeries& series, double p, int dimension,
                                                 double theta, FitWindow window);

struct GrowthReport {
  DecayFit lp;
  DecayFit linf;
  bool pass = false;
};

inline constexpr double kGrowthMinDecades = 1.5;

/// Growth slopes of ||u||_p (bound 1/4) and ||u||_inf (bound 3/4 - d/(4p)) against 1 + t.
GrowthReport check_growth(const NormSeries& series, double p, int dimension, FitWindow window);

/// Exponent arithmetic q -> p -> theta -> bound in exact rationals.
struct ExponentChain {
  std::string q;
  std::string p;
  std::string theta;
  std::string bound;
  /// (1 - theta) / 4, which must equal bound.
  std::string bound_from_theta;
  bool theta_consistent = false;
  /// d = 2 only: 1/2 - 1/p and whether it equals the bound.
  std::optional<std::string> d2_remark;
  std::optional<bool> d2_identity;

  std::string text() const;
};

/// Rejects q that is not a ratio of integers with denominator <= 10^4.
ExponentChain exponent_chain(double q, int dimension);

struct CoarsenessReport {
  double q = 0.0;
  double p = 0.0;
  int dimension = 0;
  DecayFit fit;
  ExponentChain chain;
  /// d = 2 only: 1/2 - 1/p.
  std::optional<double> d2_remark_slope;
  bool pass = false;
};

/// Coarsening window max{1 + 2/d, (6 + d)/(2 + d)} < q < 1 + 4/d.
std::pair<double, double> coarsening_window(int dimension);

CoarsenessReport check_coarseness(const NormSeries& series, double q, int dimension,
                                  FitWindow window);

struct ScanEntry {
  double amplitude = 0.0;
  double initial_gradient_lp = 0.0;
  std::string termination;
  bool pass = false;
  double M = 0.0;
};

struct ScanReport {
  std::vector<ScanEntry> entries;
  std::optional<std::size_t> largest_pass;
  std::optional<std::size_t> smallest_fail;
  /// Every PASS precedes every FAIL.
  bool monotone = true;
};

/// Runs the template at each amplitude (concurrently, results in input order).
ScanReport amplitude_scan(const ExperimentConfig& tmpl, const std::vector<double>& amplitudes,
                          unsigned workers = 0);

void to_json(nlohmann::json& j, const FitWindow& w);
void to_json(nlohmann::json& j, const DecayFit& f);
void to_json(nlohmann::json& j, const BoundednessCheck& b);
void to_json(nlohmann::json& j, const GradientBoundReport& r);
void to_json(nlohmann::json& j, const InterpolatedDecayReport& r);
void to_json(nlohmann::json& j, const GrowthReport& r);
void to_json(nlohmann::json& j, const ExponentChain& c);
void to_json(nlohmann::json& j, const CoarsenessReport& r);
void to_json(nlohmann::json& j, const ScanEntry& e);
void to_json(nlohmann::json& j, const ScanReport& r);

}  // namespace mbe
