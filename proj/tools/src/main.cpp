// mrac: simulate scenarios, solve the matching equation, run acceptance suites.
//
// Exit codes: 0 success, 1 configuration or input error, 2 aborted run,
// singular matching system or failed suite criterion.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mrac/errors.hpp"
#include "mrac/harness.hpp"
#include "mrac/matching.hpp"
#include "mrac/metrics.hpp"
#include "mrac_app/output.hpp"
#include "mrac_app/scenario_io.hpp"
#include "mrac_app/suites.hpp"

namespace {

using namespace mrac;
using namespace mrac::app;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct SimulateArgs {
  std::string scenario;
  std::optional<double> dt, t_final;
  std::optional<int> stride;
  std::string out_dir = ".";
  std::optional<std::string> controller, theta0_mode;
  bool quiet = false;
};

int cmd_simulate(const SimulateArgs& a) {
  ScenarioConfig cfg;
  try {
    cfg = resolve_scenario(a.scenario);
    if (a.dt) cfg.sim.dt = *a.dt;
    if (a.t_final) cfg.sim.t_final = *a.t_final;
    if (a.stride) cfg.sim.record_stride = *a.stride;
    if (a.controller) {
      cfg.controller = *a.controller == "baseline" ? ControllerKind::baseline : ControllerKind::proposed;
    }
    if (a.theta0_mode) {
      const Theta0Mode mode =
          *a.theta0_mode == "explicit" ? Theta0Mode::explicit_values : Theta0Mode::multipliers;
      cfg.adaptation.theta0_mode = mode;
      cfg.baseline.theta0_mode = mode;
    }
    cfg.validate();
  } catch (const ConfigError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const Error& ex) {
    std::cerr << "error: " << a.scenario << ": " << ex.what() << '\n';
    return kExitConfig;
  }

  RunRecord rec;
  try {
    rec = run_scenario(cfg);
  } catch (const Error& ex) {
    // Setup failures (e.g. explicit theta0 of the wrong length) are config errors.
    std::cerr << "error: " << cfg.name << ": " << ex.what() << '\n';
    return kExitConfig;
  }
  const MetricsSummary m = compute_metrics(rec);
  OutputBundle files;
  try {
    files = write_outputs(rec, m, a.out_dir);
  } catch (const std::exception& ex) {
    std::cerr << "error: writing outputs: " << ex.what() << '\n';
    return kExitConfig;
  }
  for (const auto& w : rec.warnings) std::cerr << "warning: " << w << '\n';
  if (!a.quiet) {
    std::cout << cfg.name << ": " << (rec.aborted ? "aborted" : "completed") << ", "
              << rec.samples.size() << " samples, tracking ratio " << m.tracking_ratio
              << ", sigma switches " << m.sigma_switch_count << '\n'
              << "  " << files.timeseries.string() << '\n'
              << "  " << files.summary.string() << '\n'
              << "  " << files.config_echo.string() << '\n';
  }
  if (rec.aborted) {
    std::cerr << "run aborted at t=" << rec.abort_time << ": " << rec.abort_reason << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_match(const std::string& path) {
  MatchingProblem mp;
  try {
    mp = load_matching_file(path);
  } catch (const ConfigError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitConfig;
  }
  try {
    const MatchedGains g = solve_matching(mp);
    const double residual = matching_residual(g, mp).max_abs_coeff();
    std::cout << matched_gains_json(g, residual).dump(2) << '\n';
    return kExitOk;
  } catch (const SingularSystem& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitRuntime;
  } catch (const Error& ex) {
    std::cerr << "error: " << path << ": " << ex.what() << '\n';
    return kExitConfig;
  }
}

int cmd_suite(const std::string& name, int seeds, bool verbose) {
  SuiteOptions opts;
  opts.seeds = seeds;
  opts.progress = verbose ? &std::cerr : nullptr;
  std::vector<CriterionResult> results;
  try {
    results = run_suite(name, opts);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitConfig;
  }
  const bool ok = print_results(std::cout, results);
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singularity-free output-feedback MRAC simulator"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario file or built-in scenario");
  simulate->add_option("scenario", sim.scenario, "scenario file or boeing-case-i|boeing-case-ii|boeing-baseline")
      ->required();
  simulate->add_option("--dt", sim.dt, "integration step [s]")->check(CLI::PositiveNumber);
  simulate->add_option("--t-final", sim.t_final, "end time [s]")->check(CLI::PositiveNumber);
  simulate->add_option("--stride", sim.stride, "record every N-th step")->check(CLI::PositiveNumber);
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->capture_default_str();
  simulate->add_option("--controller", sim.controller, "proposed|baseline")
      ->check(CLI::IsMember({"proposed", "baseline"}));
  simulate->add_option("--theta0-mode", sim.theta0_mode, "explicit|multipliers")
      ->check(CLI::IsMember({"explicit", "multipliers"}));
  simulate->add_flag("-q,--quiet", sim.quiet, "no summary on stdout");

  std::string plant_path;
  auto* match = app.add_subcommand("match", "Solve the matching equation for a plant file");
  match->add_option("plant", plant_path, "plant file (P, Z, kp; optional omega, Rm)")->required();

  std::string suite_name;
  int seeds = 20;
  bool verbose = false;
  auto* suite = app.add_subcommand("suite", "Run an acceptance suite");
  suite->add_option("name", suite_name, "paper-repro|properties|relative-degree-sweep|all")
      ->required()
      ->check(CLI::IsMember({"paper-repro", "properties", "relative-degree-sweep", "all"}));
  suite->add_option("--seeds", seeds, "instances per relative degree in the sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  suite->add_flag("-v,--verbose", verbose, "per-run progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*simulate) return cmd_simulate(sim);
  if (*match) return cmd_match(plant_path);
  if (*suite) return cmd_suite(suite_name, seeds, verbose);
  return kExitConfig;
}
