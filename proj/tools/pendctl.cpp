// pendctl: command-line front end of the inverted-pendulum control toolkit.
// Subcommands: analyze | simulate | locus | identify | tune | surface.
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pendctl/analysis.hpp"
#include "pendctl/dynamics.hpp"
#include "pendctl/errors.hpp"
#include "pendctl/fuzzy.hpp"
#include "pendctl/identify.hpp"
#include "pendctl/presets.hpp"
#include "pendctl/serialize.hpp"
#include "pendctl/simulate.hpp"
#include "pendctl/svg.hpp"

namespace {

using nlohmann::json;
using namespace pendctl;

int thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("PENDCTL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 64) {
      throw std::invalid_argument("PENDCTL_THREADS must be a positive integer no greater than 64");
    }
    n = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min(n, 64u));
}

json load_config(const std::string& path) {
  // Reads and parses up front, so nothing is computed against a missing file.
  return json::parse(read_file(path));
}

void write_output(const std::string& path, const std::string& content, const json& resolved) {
  write_file_atomic(path, content);
  write_file_atomic(path + ".config.json", resolved.dump(2) + "\n");
  std::cout << "wrote " << path << " (+ .config.json sidecar)\n";
}

std::string fmt_complex(const std::complex<double>& z) {
  std::string s = fmt_double(z.real());
  if (z.imag() != 0.0) {
    s += (z.imag() > 0.0 ? " + " : " - ") + fmt_double(std::abs(z.imag())) + "i";
  }
  return s;
}

void print_verdict(const DesignVerdict& v) {
  const auto yesno = [](bool b) { return b ? "yes" : "no"; };
  std::cout << "  stable:                 " << yesno(v.stable)
            << " (margin " << fmt_double(v.stability_margin) << ")\n"
            << "  settling under 0.1 s:   " << yesno(v.settling_ok)
            << " (margin " << fmt_double(v.settling_margin) << ")\n"
            << "  overshoot at most 2%:   " << yesno(v.overshoot_ok)
            << " (margin " << fmt_double(v.overshoot_margin) << ")\n";
}

// --- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string config, out;
};

int cmd_analyze(const AnalyzeArgs& args) {
  PhysicalParams params;
  if (!args.config.empty()) params = params_from_json(load_config(args.config));

  const TransferFunction tf = plant_transfer_function(params);
  const auto poles = tf.poles();
  const auto zeros = tf.zeros();
  const auto aug_poles = augment_integrator(tf).poles();
  const DesignVerdict verdict = meets_design_targets(poles);

  std::cout << "plant poles:\n";
  for (const auto& p : poles) std::cout << "  " << fmt_complex(p) << "\n";
  std::cout << "plant zeros:\n";
  for (const auto& z : zeros) std::cout << "  " << fmt_complex(z) << "\n";
  std::cout << "poles with integrator augmentation:\n";
  for (const auto& p : aug_poles) std::cout << "  " << fmt_complex(p) << "\n";
  std::cout << "closed-loop design targets on the open-loop poles:\n";
  print_verdict(verdict);

  if (!args.out.empty()) {
    json report = poles_zeros_json(poles, zeros);
    report["augmented_poles"] = poles_zeros_json(aug_poles, {})["poles"];
    report["targets"] = json{{"stable", verdict.stable},
                             {"stability_margin", verdict.stability_margin},
                             {"settling_ok", verdict.settling_ok},
                             {"settling_margin", verdict.settling_margin},
                             {"overshoot_ok", verdict.overshoot_ok},
                             {"overshoot_margin", verdict.overshoot_margin}};
    write_output(args.out, report.dump(2) + "\n", to_json(params));
  }
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config, out, svg;
  std::optional<double> dt, duration;
};

int cmd_simulate(const SimulateArgs& args) {
  Scenario sc;
  if (!args.config.empty()) {
    sc = scenario_from_json(load_config(args.config));
  } else {
    // Demo default: the benchmark plant balancing from 0.1 rad under the
    // shipped PD gains.
    sc = balance_scenario(benchmark_params());
    sc.controller = PdControllerSpec{shipped_pd_gains()};
  }
  if (args.dt) sc.dt = *args.dt;
  if (args.duration) sc.duration = *args.duration;
  sc.validate();

  const TrajectoryRecord tr = run_closed_loop(sc);
  const StepMetrics metrics =
      compute_metrics(tr, sc.reference_theta, 2.0, sc.metric_window_start);

  std::cout << "rows: " << tr.rows.size() << "\n"
            << "metrics: " << to_json(metrics).dump() << "\n";

  const json resolved = to_json(sc);
  if (!args.out.empty()) write_output(args.out, trajectory_csv(tr), resolved);
  if (!args.svg.empty()) write_output(args.svg, render_trajectory_svg(tr), resolved);

  if (tr.blew_up) {
    std::cerr << "simulation diverged (non-finite state); record truncated\n";
    return 2;
  }
  return 0;
}

// --- locus ------------------------------------------------------------------

struct LocusArgs {
  std::string config, out;
  double k_min = 0.1, k_max = 1000.0;
  int points = 200;
};

int cmd_locus(const LocusArgs& args) {
  PhysicalParams params;
  if (!args.config.empty()) params = params_from_json(load_config(args.config));
  if (!(args.k_min > 0.0) || !(args.k_max > args.k_min)) {
    throw std::invalid_argument("locus needs 0 < --k-min < --k-max");
  }
  if (args.points < 2) throw std::invalid_argument("--points must be >= 2");

  std::vector<double> gains(static_cast<std::size_t>(args.points));
  const double ratio = args.k_max / args.k_min;
  for (int i = 0; i < args.points; ++i) {
    gains[static_cast<std::size_t>(i)] =
        args.k_min * std::pow(ratio, static_cast<double>(i) / (args.points - 1));
  }

  const TransferFunction tf = plant_transfer_function(params);
  const TransferFunction unity{Polynomial({1.0}), Polynomial({1.0})};
  const auto samples = root_locus(tf, unity, gains, thread_budget());

  std::cout << "locus rows: " << samples.size() << "\n";
  if (!args.out.empty()) {
    const json resolved{{"params", to_json(params)},
                        {"k_min", args.k_min},
                        {"k_max", args.k_max},
                        {"points", args.points}};
    write_output(args.out, locus_csv(samples), resolved);
  }
  return 0;
}

// --- identify -----------------------------------------------------------------

struct IdentifyArgs {
  std::string config, out, poles_csv;
  std::optional<std::uint64_t> seed;
};

int cmd_identify(const IdentifyArgs& args) {
  json config_json;
  if (!args.config.empty()) config_json = load_config(args.config);

  if (!args.poles_csv.empty() && config_json.contains("target_poles")) {
    throw std::invalid_argument(
        "conflicting pole targets: --poles and \"target_poles\" in --config both given; "
        "specify exactly one");
  }

  IdentProblem prob = benchmark_ident_problem();
  if (!config_json.is_null()) prob = ident_problem_from_json(config_json, prob);
  if (!args.poles_csv.empty()) {
    prob.target_poles.clear();
    std::size_t pos = 0;
    while (pos <= args.poles_csv.size()) {
      std::size_t comma = args.poles_csv.find(',', pos);
      if (comma == std::string::npos) comma = args.poles_csv.size();
      try {
        prob.target_poles.push_back(std::stod(args.poles_csv.substr(pos, comma - pos)));
      } catch (const std::exception&) {
        throw std::invalid_argument("--poles expects comma-separated numbers, e.g. 3.8,-3.9,-0.9");
      }
      pos = comma + 1;
      if (comma == args.poles_csv.size()) break;
    }
  }
  if (args.seed) prob.seed = *args.seed;
  prob.validate();

  // Start from the fixed values, clamped into each free parameter's box.
  PhysicalParams start = prob.fixed;
  for (const BoundedParam& fp : prob.free_params) {
    double* field = nullptr;
    if (fp.name == "cart_mass") field = &start.cart_mass;
    else if (fp.name == "bob_mass") field = &start.bob_mass;
    else if (fp.name == "arm_length") field = &start.arm_length;
    else if (fp.name == "pendulum_inertia") field = &start.pendulum_inertia;
    else if (fp.name == "gravity") field = &start.gravity;
    else if (fp.name == "viscous_friction") field = &start.viscous_friction;
    else if (fp.name == "motor_friction_alpha") field = &start.motor_friction_alpha;
    else if (fp.name == "wheel_ground_mu") field = &start.wheel_ground_mu;
    else if (fp.name == "gear_mu") field = &start.gear_mu;
    else field = &start.drag_cd;
    *field = std::clamp(*field, fp.lo, fp.hi);
  }

  const IdentResult result = identify(prob, start);
  const json report = ident_report_json(result, prob.target_poles, prob.seed);

  std::cout << "residual: " << fmt_double(result.residual) << "\n"
            << "converged: " << (result.converged ? "yes" : "no") << "\n"
            << "params: " << to_json(result.params).dump() << "\n";
  if (!args.out.empty()) write_output(args.out, report.dump(2) + "\n", to_json(prob));

  if (!result.converged) {
    std::cerr << "identification did not reach the targets (residual "
              << fmt_double(result.residual) << ")\n";
    return 2;
  }
  return 0;
}

// --- tune ---------------------------------------------------------------------

struct TuneArgs {
  std::string config, out;
  bool pd_only = false;
  long budget = kDefaultTuneBudget;
  std::optional<std::uint64_t> seed;
};

int cmd_tune(const TuneArgs& args) {
  Scenario sc = balance_scenario(benchmark_params());
  if (!args.config.empty()) sc = scenario_from_json(load_config(args.config));

  const TuneObjective objective = default_tune_objective(sc);
  const GainSpace space = default_gain_space(args.pd_only);
  const PidGains start = args.pd_only ? shipped_pd_gains() : shipped_pid_gains();
  const std::uint64_t seed = args.seed.value_or(kDefaultSeed);

  const TuneResult result = tune_gains(objective, space, start, args.budget, seed);

  std::cout << "gains: " << to_json(result.gains).dump() << "\n"
            << "metrics: " << to_json(result.metrics).dump() << "\n"
            << "evaluations: " << result.evaluations << "\n";

  if (!args.out.empty()) {
    const json report{{"gains", to_json(result.gains)},
                      {"metrics", to_json(result.metrics)},
                      {"objective_value", result.objective_value},
                      {"evaluations", result.evaluations},
                      {"converged", result.converged}};
    const json resolved{{"scenario", to_json(sc)},
                        {"pd_only", args.pd_only},
                        {"budget", args.budget},
                        {"seed", seed}};
    write_output(args.out, report.dump(2) + "\n", resolved);
  }
  return 0;
}

// --- surface --------------------------------------------------------------------

struct SurfaceArgs {
  std::string config, out;
  bool scheduler = false;
  int grid = 101;
};

int cmd_surface(const SurfaceArgs& args) {
  if (!args.config.empty() && args.scheduler) {
    throw std::invalid_argument(
        "conflicting system selection: --config and --scheduler both given; "
        "--scheduler picks the built-in gain scheduler");
  }
  FuzzyInferenceSystem fis;
  if (!args.config.empty()) {
    fis = fis_from_json(load_config(args.config));
  } else if (args.scheduler) {
    fis = build_gain_scheduler(GainSchedulerConfig{});
  } else {
    fis = build_direct_controller(DirectControllerConfig{});
  }

  const SurfaceTable table = export_surface(fis, args.grid);
  std::cout << "surface rows: " << table.rows.size() << "\n";
  if (!args.out.empty()) {
    const json resolved{{"fis", to_json(fis)}, {"grid", args.grid}};
    write_output(args.out, surface_csv(table), resolved);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverted-pendulum-on-a-cart control toolkit"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Pole/zero report and design-target verdicts for a plant");
  analyze->add_option("--config", analyze_args.config,
                      "plant parameter JSON file (10 snake_case keys)");
  analyze->add_option("--out", analyze_args.out, "report JSON output path");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Closed-loop run; trajectory CSV and optional SVG plot");
  simulate->add_option("--config", sim_args.config, "scenario JSON file");
  simulate->add_option("--dt", sim_args.dt, "integration step (s); overrides the config value");
  simulate->add_option("--duration", sim_args.duration,
                       "run length (s); overrides the config value");
  simulate->add_option("--out", sim_args.out, "trajectory CSV output path");
  simulate->add_option("--svg", sim_args.svg, "SVG plot output path (theta and u vs t)");

  LocusArgs locus_args;
  CLI::App* locus = app.add_subcommand(
      "locus", "Root locus of proportional feedback over a gain grid");
  locus->add_option("--config", locus_args.config,
                    "plant parameter JSON file (10 snake_case keys)");
  locus->add_option("--k-min", locus_args.k_min, "smallest gain (dimensionless, > 0)");
  locus->add_option("--k-max", locus_args.k_max, "largest gain (dimensionless)");
  locus->add_option("--points", locus_args.points, "number of log-spaced gains (>= 2)");
  locus->add_option("--out", locus_args.out, "locus CSV output path");

  IdentifyArgs ident_args;
  CLI::App* identify = app.add_subcommand(
      "identify", "Recover plant parameters that reproduce target poles");
  identify->add_option("--config", ident_args.config, "identification problem JSON file");
  identify->add_option("--poles", ident_args.poles_csv,
                       "target poles as comma-separated values (rad/s), e.g. 3.8,-3.9,-0.9");
  identify->add_option("--seed", ident_args.seed, "restart RNG seed (unsigned 64-bit)");
  identify->add_option("--out", ident_args.out, "matched parameter JSON output path");

  TuneArgs tune_args;
  CLI::App* tune = app.add_subcommand(
      "tune", "Search PID/PD gains against closed-loop step metrics");
  tune->add_option("--config", tune_args.config,
                   "scenario JSON file (its controller entry is replaced per candidate)");
  tune->add_flag("--pd", tune_args.pd_only, "search PD gains only (integral pinned to zero)");
  tune->add_option("--budget", tune_args.budget, "maximum closed-loop evaluations (count)");
  tune->add_option("--seed", tune_args.seed, "restart RNG seed (unsigned 64-bit)");
  tune->add_option("--out", tune_args.out, "gains + metrics JSON output path");

  SurfaceArgs surf_args;
  CLI::App* surface = app.add_subcommand(
      "surface", "Export a fuzzy controller's control surface as CSV");
  surface->add_option("--config", surf_args.config, "fuzzy system JSON file");
  surface->add_flag("--scheduler", surf_args.scheduler,
                    "export the built-in gain scheduler instead of the direct controller");
  surface->add_option("--grid", surf_args.grid, "grid points per input (count, >= 2)");
  surface->add_option("--out", surf_args.out, "surface CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(analyze_args);
    if (simulate->parsed()) return cmd_simulate(sim_args);
    if (locus->parsed()) return cmd_locus(locus_args);
    if (identify->parsed()) return cmd_identify(ident_args);
    if (tune->parsed()) return cmd_tune(tune_args);
    if (surface->parsed()) return cmd_surface(surf_args);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config parse error at byte " << e.byte << ": " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
