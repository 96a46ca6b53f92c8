#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pendctl/dynamics.hpp"
#include "pendctl/fuzzy.hpp"
#include "pendctl/pid.hpp"

namespace pendctl {

/// Additive force pulse at the plant input.
struct Disturbance {
  enum class Kind { none, impulse };
  Kind kind = Kind::none;
  double amplitude = 0.0;   // N
  double start_time = 0.0;  // s
  double width = 0.0;       // s

  void validate() const;
};

/// amplitude for t in [start, start + width), else 0.
double impulse_force(const Disturbance& d, double t);

struct PidControllerSpec {
  PidGains gains;
};
struct PdControllerSpec {
  PidGains gains;  // ki is forced to zero
};
struct FuzzyDirectSpec {
  FuzzyInferenceSystem fis;  // (theta, theta_dot) -> force
};
struct FuzzyScheduledPidSpec {
  FuzzyInferenceSystem scheduler;  // error -> (kp, kd)
  PidGains base;                   // supplies ki; kp/kd overridden per step
};
using ControllerSpec =
    std::variant<PidControllerSpec, PdControllerSpec, FuzzyDirectSpec, FuzzyScheduledPidSpec>;

/// One closed-loop experiment: plant, controller, reference, disturbance
/// and sampling grid.
struct Scenario {
  PhysicalParams params;
  PlantModel model = PlantModel::linear;
  bool drag_enabled = false;
  ControllerSpec controller = PidControllerSpec{};
  double reference_theta = 0.0;  // rad
  PendulumState initial;
  Disturbance disturbance;
  double duration = 10.0;           // s
  double dt = 0.001;                // s
  double metric_window_start = 0.05;  // s, skip the initial transient spike
  int control_hold = 1;             // controller update every `hold` steps
  ActuatorLimits limits;

  void validate() const;
};

struct TrajectoryRow {
  double t, x, x_dot, theta, theta_dot, u, d;
};

/// Uniformly sampled closed-loop trajectory. t_k = k*dt exactly. A blow-up
/// truncates the record at the last finite row and sets the flag.
struct TrajectoryRecord {
  double dt = 0.0;
  std::vector<TrajectoryRow> rows;
  bool blew_up = false;
};

TrajectoryRecord run_closed_loop(const Scenario& sc);

/// Settling/overshoot/steady-state summary of a trajectory. All
/// percentages are relative to the initial offset from the reference (or
/// to the peak excursion when the run starts on the reference, as an
/// impulse run does).
struct StepMetrics {
  std::optional<double> settling_time_2pct;  // s, absolute time; empty if never settles
  double overshoot_pct = 0.0;
  double steady_state_error_pct = 0.0;
  double peak_theta = 0.0;  // rad, theta at the largest excursion
  bool blew_up = false;
};

StepMetrics compute_metrics(const TrajectoryRecord& tr, double reference, double band_pct,
                            double window_start);

struct ComparisonEntry {
  std::string label;
  StepMetrics metrics;
};

struct ComparisonTable {
  std::vector<ComparisonEntry> entries;
  std::string best_settling;
  std::string best_overshoot;
  std::string best_sse;
};

/// Runs each labeled scenario and tabulates the metrics side by side.
/// Scenarios must share the plant and the disturbance.
ComparisonTable compare_controllers(
    const std::vector<std::pair<std::string, Scenario>>& scenarios);

}  // namespace pendctl
