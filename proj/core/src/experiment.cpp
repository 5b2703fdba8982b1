#include "mbe/experiment.hpp"

#include <fstream>
#include <set>

#include "mbe/error.hpp"
#include "mbe/initial_data.hpp"
#include "mbe/spectral.hpp"
#include "mbe/svg_plot.hpp"

namespace mbe {

Trajectory run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  SolverConfig solver = cfg.solver;
  solver.extra_exponents.push_back(cfg.exponent_p() / (1.0 - cfg.interpolation_theta()));
  const Field u0 = make_initial_data(cfg.initial, cfg.grid);
  return solve(u0, cfg.horizon, cfg.model, solver);
}

Trajectory simulate(const ExperimentConfig& cfg) {
  Trajectory traj = run_experiment(cfg);
  save_trajectory(traj, cfg.output_dir, nlohmann::json(cfg));
  return traj;
}

namespace {

template <class F>
nlohmann::json guarded(F&& check) {
  try {
    return check();
  } catch (const InvalidArgument& e) {
    return nlohmann::json{{"verdict", "SKIPPED"}, {"reason", e.what()}};
  }
}

}  // namespace

nlohmann::json verify_run(const StoredRun& run) {
  const ExperimentConfig cfg = experiment_config_from_json(run.meta.at("config"));
  const std::string termination = run.meta.at("run").at("termination").get<std::string>();
  const int d = cfg.grid.dimension();
  const double p = cfg.exponent_p();
  const FitWindow window = cfg.fit_window();

  nlohmann::json out;
  out["run"] = run.directory.string();
  out["termination"] = termination;
  out["p"] = p;
  out["q"] = cfg.model.q();
  if (termination != "completed") {
    out["gradient_bounds"] = {{"verdict", "FAIL"}, {"reason", "run terminated: " + termination}};
    return out;
  }
  out["gradient_bounds"] = check_gradient_bounds(run.norms, p, d, window);
  out["interpolated_decay"] = guarded([&] {
    return nlohmann::json(
        check_interpolated_decay(run.norms, p, d, cfg.interpolation_theta(), window));
  });
  out["growth"] = guarded([&] { return nlohmann::json(check_growth(run.norms, p, d, window)); });
  out["coarseness"] =
      guarded([&] { return nlohmann::json(check_coarseness(run.norms, cfg.model.q(), d, window)); });
  return out;
}

nlohmann::json regenerate_report(const std::filesystem::path& dir) {
  const StoredRun run = load_run(dir);
  const nlohmann::json report = verify_run(run);
  {
    std::ofstream out(dir / "verification.json");
    if (!out) throw Error("cannot write " + (dir / "verification.json").string());
    out << report.dump(2) << '\n';
  }
  const ExperimentConfig cfg = experiment_config_from_json(run.meta.at("config"));
  const double p = cfg.exponent_p();
  const std::set<std::string> fitted = {
      norm_column("grad", kInf), norm_column("grad", p), norm_column("u", p),
      norm_column("u", kInf), norm_column("grad", p / (1.0 - cfg.interpolation_theta())),
      "coarseness"};
  write_track_plots(run.norms, dir / "plots", fitted);
  return report;
}

}  // namespace mbe
