#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mbe/bounds_lab.hpp"
#include "mbe/error.hpp"
#include "mbe/experiment.hpp"
#include "mbe/harness.hpp"
#include "mbe/semigroup.hpp"
#include "mbe/spectral.hpp"

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw mbe::InvalidArgument("cannot open " + path);
  return json::parse(in);
}

void emit(const json& j, const std::string& out) {
  std::cout << j.dump(2) << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw mbe::Error("cannot write " + out);
    f << j.dump(2) << '\n';
  }
}

/// Six log-spaced times over [0.1, 1].
std::vector<double> default_times() {
  std::vector<double> t;
  for (int i = 0; i < 6; ++i) t.push_back(0.1 * std::pow(10.0, i / 5.0));
  return t;
}

json bihari_suite(std::uint64_t seed, int trials) {
  using namespace mbe;
  json out;
  BihariProblem gronwall;
  gronwall.k = 1.5;
  gronwall.M = 0.7;
  gronwall.h = {{0.0, 0.5, 1.0, 2.0}, {1.0, 0.2, 0.8, 0.4}};
  gronwall.omega = Nonlinearity::identity();
  double err = 0.0;
  for (double t : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const double exact = gronwall.k * std::exp(gronwall.M * gronwall.h.integral_to(t));
    err = std::max(err, std::abs(bihari_bound(gronwall, t).value - exact) / exact);
  }
  out["gronwall_max_relative_error"] = err;
  out["gronwall_verify"] = bihari_verify(gronwall, trials, seed);

  BihariProblem square;
  square.k = 1.0;
  square.M = 1.0;
  square.h = TabulatedFunction::constant(0.0, 2.0, 1.0);
  square.omega = Nonlinearity::power(2.0);
  out["square_blowup_time"] = bihari_domain_boundary(square, 1e-9);
  out["square_verify"] = bihari_verify(square, trials, seed);
  return out;
}

json strauss_suite(std::uint64_t seed, int cases) {
  using namespace mbe;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int holds = 0;
  int violations = 0;
  int undecided = 0;
  double worst = -1.0;
  for (int i = 0; i < cases; ++i) {
    StraussCase c;
    c.gamma = 1.1 + 2.9 * unit(rng);
    c.c2 = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double critical =
        (1.0 - 1.0 / c.gamma) * std::pow(c.gamma, -1.0 / (c.gamma - 1.0)) /
        std::pow(c.c2, 1.0 / (c.gamma - 1.0));
    c.c1 = critical * 1.5 * unit(rng) + 1e-12;
    const StraussResult r = strauss_check(c);
    const FixedPointResult f = strauss_fixed_point(c);
    if (f.undecided) ++undecided;
    if (r.condition_holds) {
      ++holds;
      if (!f.converged || f.limit >= r.bound) ++violations;
      worst = std::max(worst, f.limit / r.bound);
    }
  }
  return json{{"cases", cases},           {"seed", seed},
              {"condition_holds", holds}, {"violations", violations},
              {"undecided", undecided},   {"max_limit_over_bound", worst}};
}

json beta_suite(std::uint64_t seed, int pairs) {
  using namespace mbe;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  json out;
  out["pi_error"] = std::abs(beta_integral_constant(0.5, 0.5) - M_PI);
  json reports = json::array();
  for (int i = 0; i < pairs; ++i) {
    const double a = -0.5 + 1.4 * unit(rng);
    const double b = -0.5 + 1.4 * unit(rng);
    reports.push_back(beta_scaling_report(a, b));
  }
  out["pairs"] = reports;
  out["seed"] = seed;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mbe: spectral simulator and verification harness for MBE growth equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* sim = app.add_subcommand("simulate", "Run one experiment and persist the trajectory");
  sim->add_option("-c,--config", config_path, "Experiment config JSON (defaults if omitted)");
  sim->add_option("-o,--output", out_dir, "Override the output directory");

  auto* defaults = app.add_subcommand("defaults", "Print the default experiment config");

  int kd = 1;
  int kn = 256;
  double kl = 40.0;
  int order = 0;
  std::string kp = "inf";
  std::vector<double> times;
  std::string report_out;
  auto* vk = app.add_subcommand("verify-kernel", "Fit the kernel-norm scaling law");
  vk->add_option("-d,--dimension", kd, "Dimension (1 or 2)");
  vk->add_option("-N,--points", kn, "Points per axis");
  vk->add_option("-L,--length", kl, "Box length");
  vk->add_option("-n,--order", order, "Derivative order (0, 1, 2)");
  vk->add_option("-p,--exponent", kp, "Norm exponent (number or inf)");
  vk->add_option("-t,--times", times, "Sample times (default 6 log-spaced in [0.1, 1])");
  vk->add_option("-o,--output", report_out, "Also write the report JSON here");

  std::string run_dir;
  auto* vb = app.add_subcommand("verify-bounds", "Gradient, growth and coarsening checks on a run");
  vb->add_option("run", run_dir, "Run directory")->required();

  std::string suite = "all";
  std::uint64_t seed = 1;
  int trials = 100;
  auto* bl = app.add_subcommand("bounds-lab", "Bihari, Strauss and Beta suites");
  bl->add_option("-s,--suite", suite, "bihari | strauss | beta | all")
      ->check(CLI::IsMember({"bihari", "strauss", "beta", "all"}));
  bl->add_option("--seed", seed, "Base seed");
  bl->add_option("--trials", trials, "Bihari trials");
  bl->add_option("-o,--output", report_out, "Also write the report JSON here");

  std::vector<double> amplitudes;
  unsigned workers = 0;
  auto* scan = app.add_subcommand("scan", "Amplitude scan for the smallness threshold");
  scan->add_option("-c,--config", config_path, "Template config JSON");
  scan->add_option("-a,--amplitudes", amplitudes, "Increasing amplitudes (>= 3)")->required();
  scan->add_option("-j,--workers", workers, "Concurrent runs (0 = hardware)");
  scan->add_option("-o,--output", report_out, "Also write the report JSON here");

  auto* rep = app.add_subcommand("report", "Regenerate verification.json and SVG plots");
  rep->add_option("run", run_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      mbe::ExperimentConfig cfg = mbe::experiment_config_from_json(read_json(config_path));
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      const mbe::Trajectory traj = mbe::simulate(cfg);
      std::cout << json{{"output", cfg.output_dir},
                        {"samples", traj.norms.size()},
                        {"run", traj.meta}}
                       .dump(2)
                << '\n';
      return traj.completed() ? 0 : 2;
    }
    if (*defaults) {
      std::cout << json(mbe::ExperimentConfig{}).dump(2) << '\n';
      return 0;
    }
    if (*vk) {
      const double p = kp == "inf" ? mbe::kInf : std::stod(kp);
      if (times.empty()) times = default_times();
      const auto r = mbe::verify_kernel_scaling(mbe::GridSpec(kd, kn, kl), order, p, times);
      emit(r, report_out);
      return 0;
    }
    if (*vb) {
      const json r = mbe::verify_run(mbe::load_run(run_dir));
      emit(r, (std::filesystem::path(run_dir) / "verification.json").string());
      return 0;
    }
    if (*bl) {
      json r;
      if (suite == "bihari" || suite == "all") r["bihari"] = bihari_suite(seed, trials);
      if (suite == "strauss" || suite == "all") r["strauss"] = strauss_suite(seed, 1000);
      if (suite == "beta" || suite == "all") r["beta"] = beta_suite(seed, 5);
      emit(r, report_out);
      return 0;
    }
    if (*scan) {
      const mbe::ExperimentConfig cfg = mbe::experiment_config_from_json(read_json(config_path));
      emit(mbe::amplitude_scan(cfg, amplitudes, workers), report_out);
      return 0;
    }
    if (*rep) {
      std::cout << mbe::regenerate_report(run_dir).dump(2) << '\n';
      return 0;
    }
  } catch (const mbe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
