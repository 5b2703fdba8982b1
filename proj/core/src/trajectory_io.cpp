#include "mbe/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mbe/error.hpp"
#include "mbe/field_io.hpp"

namespace mbe {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw InvalidArgument("bad number '" + s + "' in norms.csv");
  return v;
}

}  // namespace

void write_norms_csv(std::ostream& out, const NormSeries& series) {
  out << "t";
  for (const auto& n : series.names()) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_double(series.times()[i]);
    for (const auto& n : series.names()) out << ',' << format_double(series.column(n)[i]);
    out << '\n';
  }
}

NormSeries read_norms_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("norms.csv is empty");
  std::vector<std::string> header = split(line);
  if (header.empty() || header.front() != "t") throw InvalidArgument("norms.csv must start with t");
  header.erase(header.begin());
  NormSeries series(header);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size() + 1) throw InvalidArgument("ragged row in norms.csv");
    std::vector<double> row;
    row.reserve(header.size());
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i]));
    series.append(parse_double(cells[0]), row);
  }
  return series;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                     const nlohmann::json& config) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "snapshots");
  {
    std::ofstream out(dir / "norms.csv");
    if (!out) throw Error("cannot write " + (dir / "norms.csv").string());
    write_norms_csv(out, traj.norms);
  }
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.mbef", i);
    save_field(dir / "snapshots" / name, traj.snapshots[i].field);
    snaps.push_back({{"file", std::string("snapshots/") + name}, {"time", traj.snapshots[i].time}});
  }
  nlohmann::json meta;
  meta["config"] = config;
  meta["grid"] = {{"d", traj.grid.dimension()}, {"N", traj.grid.points()}, {"L", traj.grid.length()}};
  meta["run"] = traj.meta;
  meta["samples"] = traj.norms.size();
  meta["snapshots"] = snaps;
  std::ofstream out(dir / "meta.json");
  if (!out) throw Error("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

StoredRun load_run(const std::filesystem::path& dir) {
  StoredRun run;
  run.directory = dir;
  std::ifstream norms(dir / "norms.csv");
  if (!norms) throw InvalidArgument("missing " + (dir / "norms.csv").string());
  run.norms = read_norms_csv(norms);
  std::ifstream meta(dir / "meta.json");
  if (!meta) throw InvalidArgument("missing " + (dir / "meta.json").string());
  run.meta = nlohmann::json::parse(meta);
  for (const auto& s : run.meta.value("snapshots", nlohmann::json::array())) {
    run.snapshot_times.push_back(s.at("time").get<double>());
    run.snapshot_files.push_back(dir / s.at("file").get<std::string>());
  }
  return run;
}

}  // namespace mbe
