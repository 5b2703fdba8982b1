#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "mbe/norm_series.hpp"
#include "mbe/solver.hpp"

namespace mbe {

/// CSV with header "t,<track>,..." and one row per sample, values in %.17g.
void write_norms_csv(std::ostream& out, const NormSeries& series);
NormSeries read_norms_csv(std::istream& in);

/// Writes dir/norms.csv, dir/snapshots/*.mbef and dir/meta.json. The config
/// echo is stored under "config" in meta.json.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                     const nlohmann::json& config);

struct StoredRun {
  std::filesystem::path directory;
  NormSeries norms;
  nlohmann::json meta;
  std::vector<double> snapshot_times;
  std::vector<std::filesystem::path> snapshot_files;
};

StoredRun load_run(const std::filesystem::path& dir);

}  // namespace mbe
