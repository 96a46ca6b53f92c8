#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pendctl/dynamics.hpp"
#include "pendctl/pid.hpp"
#include "pendctl/simulate.hpp"

namespace pendctl {

/// One free physical parameter with its search box. `name` must be a
/// PhysicalParams field name (snake_case, e.g. "cart_mass").
struct BoundedParam {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

/// Recover plant parameters whose linearized poles match `target_poles`.
/// Parameters not listed in `free_params` keep their values from `fixed`.
struct IdentProblem {
  std::vector<double> target_poles;
  std::vector<BoundedParam> free_params;
  PhysicalParams fixed;
  bool slave_inertia = true;  // pendulum_inertia follows bob_mass*arm_length^2/3
  int restarts = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct IdentResult {
  PhysicalParams params;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Sum of squared distances between the plant's poles and the targets,
/// both sorted by real part; any imaginary part is penalized as-is.
double pole_residual(const PhysicalParams& p, const std::vector<double>& targets);

/// Bounded simplex descent on pole_residual with random restarts. The
/// first attempt starts from `start` (which must lie within the bounds);
/// later attempts sample the box with the problem's seed. Deterministic.
IdentResult identify(const IdentProblem& prob, const PhysicalParams& start);

/// Weighted closed-loop objective for gain search. The scenario's
/// controller field is replaced by the candidate gains on every evaluation.
struct TuneObjective {
  Scenario scenario;
  double settling_weight = 10.0;   // per second
  double overshoot_weight = 1.0;   // per percent
  double sse_weight = 1.0;         // per percent

  void validate() const;
};

struct GainSpace {
  double kp_lo = 0.5, kp_hi = 200.0;
  double ki_lo = 0.5, ki_hi = 100.0;
  double kd_lo = 0.05, kd_hi = 50.0;
  bool pd_only = false;  // pins ki to zero and searches (kp, kd) only

  void validate() const;
};

struct TuneResult {
  PidGains gains;
  StepMetrics metrics;
  double objective_value = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Simplex search over the gain box, `budget` = maximum closed-loop
/// evaluations (0 returns the start point unevolved). Throws
/// numerical_error naming the best candidate when nothing in budget
/// stabilizes the plant. Deterministic for a fixed seed.
TuneResult tune_gains(const TuneObjective& obj, const GainSpace& space, const PidGains& start,
                      long budget, std::uint64_t seed);

}  // namespace pendctl
