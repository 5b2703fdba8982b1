#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "mbe/norm_series.hpp"

namespace mbe {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Standalone SVG line chart. Log axes drop non-positive points.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
               const PlotOptions& options);

/// One chart per track named <track>.svg; tracks in `log_log` are drawn on log-log axes.
std::vector<std::filesystem::path> write_track_plots(const NormSeries& norms,
                                                     const std::filesystem::path& dir,
                                                     const std::set<std::string>& log_log);

}  // namespace mbe
