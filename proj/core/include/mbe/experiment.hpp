#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "mbe/harness.hpp"
#include "mbe/solver.hpp"
#include "mbe/trajectory_io.hpp"

namespace mbe {

/// Builds the initial data and integrates; the p_theta track of the
/// interpolated decay check is always recorded.
Trajectory run_experiment(const ExperimentConfig& cfg);

/// run_experiment followed by save_trajectory into cfg.output_dir.
Trajectory simulate(const ExperimentConfig& cfg);

/// All harness checks on a persisted run, rebuilt from its meta.json config.
/// Checks whose preconditions fail are reported as skipped with the reason.
nlohmann::json verify_run(const StoredRun& run);

/// Rewrites verification.json and plots/*.svg of a run directory.
nlohmann::json regenerate_report(const std::filesystem::path& dir);

}  // namespace mbe
