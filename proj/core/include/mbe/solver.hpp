#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbe/currents.hpp"
#include "mbe/field.hpp"
#include "mbe/norm_series.hpp"

namespace mbe {

enum class Scheme { picard_duhamel, etd2 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverConfig {
  Scheme scheme = Scheme::etd2;
  double step = 1e-3;
  /// Quadrature nodes per step for the Picard scheme, endpoints included.
  int nodes = 3;
  /// Absolute tolerance on the W^{1,p} cap W^{1,inf} change between sweeps.
  double picard_tolerance = 1e-10;
  int picard_max_iterations = 50;
  bool dealias = true;
  /// Keep every k-th step as a snapshot (0 keeps only the first and last).
  int snapshot_stride = 0;
  /// Halt when ||u||_{W^{1,inf}} exceeds this multiple of its initial value.
  double blowup_factor = 1e3;
  /// Extra exponents recorded in the norm series besides {1, p, 2, pq, inf}.
  std::vector<double> extra_exponents;

  void validate() const;
};

void to_json(nlohmann::json& j, const SolverConfig& c);
SolverConfig solver_config_from_json(const nlohmann::json& j);

/// Sweep statistics of one Picard step.
struct StepStats {
  int iterations = 0;
  /// Successive sweep differences and their ratios diff_n / diff_{n-1}.
  std::vector<double> differences;
  std::vector<double> ratios;
};

/// ||u||_{W^{1,p}} + ||u||_{W^{1,inf}}.
double w1p_cap_w1inf(const Field& u, double p);

/// One step of the Duhamel fixed point with product integration on cfg.nodes
/// nodes. The current is frozen per subinterval at the average of its endpoint
/// values and propagated with exact exp / phi_1 weights.
Field picard_step(const Field& u, double h, const CurrentModel& model, const SolverConfig& cfg,
                  StepStats* stats = nullptr);

/// One Cox-Matthews ETD2RK step with the biharmonic part integrated exactly.
Field etd2_step(const Field& u, double h, const CurrentModel& model, const SolverConfig& cfg);

struct Snapshot {
  double time = 0.0;
  Field field;
};

struct TrajectoryMeta {
  /// completed | blow_up | ceiling | step_size
  std::string termination = "completed";
  std::string message;
  double end_time = 0.0;
  double exponent_p = 0.0;
  double q = 0.0;
  double ceiling = 0.0;
  double max_boundary_ratio = 0.0;
  bool boundary_warning = false;
  double max_tail_fraction = 0.0;
  bool tail_warning = false;
  double mean_drift = 0.0;
  int max_picard_iterations = 0;
  double max_contraction_ratio = 0.0;
  double wall_seconds = 0.0;
};

inline constexpr double kBoundaryGuard = 1e-8;
inline constexpr double kTailGuard = 1e-6;

struct Trajectory {
  GridSpec grid;
  std::vector<double> times;
  std::vector<Snapshot> snapshots;
  NormSeries norms;
  TrajectoryMeta meta;

  bool completed() const noexcept { return meta.termination == "completed"; }
  /// Field at the last stored time.
  const Field& final_field() const { return snapshots.back().field; }
};

/// Exponents tracked by solve: {1, p, 2, pq, inf} plus cfg extras, sorted, unique.
std::vector<double> tracked_exponents(const CurrentModel& model, int dimension,
                                      const SolverConfig& cfg);

/// Integrates from 0 to T (T must be a whole number of steps).
Trajectory solve(const Field& u0, double horizon, const CurrentModel& model,
                 const SolverConfig& cfg);

void to_json(nlohmann::json& j, const TrajectoryMeta& m);

/// Iterates u^n of the linearized scheme on [0, delta]; u^0 is free evolution and
/// u^n is driven by the current of u^{n-1}.
struct IterationStudy {
  double interval = 0.0;
  int nodes = 0;
  double initial_norm = 0.0;
  /// sup over nodes of ||u^n - u^{n-1}||, n = 1..n_max.
  std::vector<double> differences;
  /// differences[n] / differences[n-1] (one shorter than differences).
  std::vector<double> ratios;
  /// max_n sup_t ||u^n(t)|| / ||u_0||.
  double doubling_margin = 0.0;
  /// sup_t ||u^0(t)||_{W^{1,p}} / ||u_0||_{W^{1,p}}.
  double free_evolution_margin = 0.0;
};

IterationStudy iteration_study(const Field& u0, double delta, int n_max, const CurrentModel& model,
                               const SolverConfig& cfg);

void to_json(nlohmann::json& j, const IterationStudy& s);

struct ContinuityReport {
  double epsilon = 0.0;
  double sup_difference = 0.0;
  /// sup_{t <= delta} ||u - v|| / ||u_0 - v_0||.
  double constant = 0.0;
};

/// Runs u0 and u0 + epsilon * direction / ||direction|| over [0, delta].
ContinuityReport continuity_study(const Field& u0, const Field& direction, double epsilon,
                                  double delta, const CurrentModel& model, const SolverConfig& cfg);

}  // namespace mbe
