#include "pendctl/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pendctl/analysis.hpp"
#include "pendctl/errors.hpp"
#include "pendctl/optim.hpp"

namespace pendctl {

namespace {

double& field_by_name(PhysicalParams& p, const std::string& name) {
  if (name == "cart_mass") return p.cart_mass;
  if (name == "bob_mass") return p.bob_mass;
  if (name == "arm_length") return p.arm_length;
  if (name == "pendulum_inertia") return p.pendulum_inertia;
  if (name == "gravity") return p.gravity;
  if (name == "viscous_friction") return p.viscous_friction;
  if (name == "motor_friction_alpha") return p.motor_friction_alpha;
  if (name == "wheel_ground_mu") return p.wheel_ground_mu;
  if (name == "gear_mu") return p.gear_mu;
  if (name == "drag_cd") return p.drag_cd;
  throw std::invalid_argument("unknown physical parameter name: " + name);
}

PhysicalParams assemble(const IdentProblem& prob, const std::vector<double>& x) {
  PhysicalParams p = prob.fixed;
  for (std::size_t i = 0; i < prob.free_params.size(); ++i) {
    field_by_name(p, prob.free_params[i].name) = x[i];
  }
  if (prob.slave_inertia) {
    p.pendulum_inertia = p.bob_mass * p.arm_length * p.arm_length / 3.0;
  }
  return p;
}

constexpr double kInfeasiblePenalty = 1e30;

}  // namespace

void IdentProblem::validate() const {
  if (target_poles.empty()) throw std::invalid_argument("target pole list is empty");
  for (double t : target_poles) {
    if (!std::isfinite(t)) throw std::invalid_argument("target poles must be finite");
  }
  if (free_params.empty()) {
    throw std::invalid_argument("identification needs at least one free parameter");
  }
  for (std::size_t i = 0; i < free_params.size(); ++i) {
    const BoundedParam& fp = free_params[i];
    PhysicalParams probe;  // name check only
    field_by_name(probe, fp.name);
    if (!std::isfinite(fp.lo) || !std::isfinite(fp.hi) || !(fp.lo < fp.hi)) {
      throw std::invalid_argument("bounds for " + fp.name + " must be finite with lo < hi");
    }
    for (std::size_t j = i + 1; j < free_params.size(); ++j) {
      if (free_params[j].name == fp.name) {
        throw std::invalid_argument("duplicate free parameter: " + fp.name);
      }
    }
    if (slave_inertia && fp.name == "pendulum_inertia") {
      throw std::invalid_argument(
          "pendulum_inertia cannot be free while slaved to bob_mass*arm_length^2/3");
    }
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

double pole_residual(const PhysicalParams& p, const std::vector<double>& targets) {
  std::vector<std::complex<double>> poles = plant_transfer_function(p).poles();
  if (targets.size() != poles.size()) {
    throw std::invalid_argument("target pole count does not match the plant order");
  }
  std::sort(poles.begin(), poles.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<double> sorted_targets = targets;
  std::sort(sorted_targets.begin(), sorted_targets.end());

  double acc = 0.0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double dr = poles[i].real() - sorted_targets[i];
    acc += dr * dr + poles[i].imag() * poles[i].imag();
  }
  return acc;
}

IdentResult identify(const IdentProblem& prob, const PhysicalParams& start) {
  prob.validate();

  const std::size_t n = prob.free_params.size();
  std::vector<double> x0(n);
  std::vector<std::pair<double, double>> bounds(n);
  {
    PhysicalParams s = start;
    for (std::size_t i = 0; i < n; ++i) {
      const BoundedParam& fp = prob.free_params[i];
      x0[i] = field_by_name(s, fp.name);
      bounds[i] = {fp.lo, fp.hi};
      if (x0[i] < fp.lo || x0[i] > fp.hi) {
        throw std::invalid_argument("start value for " + fp.name + " is outside its bounds");
      }
    }
  }

  const auto objective = [&](const std::vector<double>& x) {
    try {
      const PhysicalParams candidate = assemble(prob, x);
      candidate.validate();
      return pole_residual(candidate, prob.target_poles);
    } catch (const std::exception&) {
      return kInfeasiblePenalty;  // infeasible corner of the box
    }
  };

  NelderMeadOptions opts;
  opts.max_iters = 2000;
  opts.simplex_tol = 1e-9;
  opts.target = 1e-10;

  std::mt19937_64 rng(prob.seed);
  std::vector<double> best_x = x0;
  double best_value = std::numeric_limits<double>::infinity();
  int total_iters = 0;

  for (int r = 0; r < prob.restarts; ++r) {
    std::vector<double> attempt = x0;
    if (r > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        std::uniform_real_distribution<double> dist(bounds[i].first, bounds[i].second);
        attempt[i] = dist(rng);
      }
    }
    const NelderMeadResult res = nelder_mead(objective, attempt, bounds, opts);
    total_iters += res.iterations;
    if (res.value < best_value) {
      best_value = res.value;
      best_x = res.x;
    }
    if (best_value < opts.target) break;
  }

  IdentResult result;
  result.params = assemble(prob, best_x);
  result.residual = objective(best_x);  // re-check: stored residual is the objective at params
  result.iterations = total_iters;
  // "Converged" means the targets were actually reproduced, not merely that
  // the simplex collapsed at some non-matching local minimum.
  result.converged = result.residual < 1e-6;
  return result;
}

void TuneObjective::validate() const {
  scenario.validate();
  for (double w : {settling_weight, overshoot_weight, sse_weight}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("metric weights must be finite and >= 0");
    }
  }
}

void GainSpace::validate() const {
  const auto check = [](double lo, double hi, const char* what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi) || lo < 0.0) {
      throw std::invalid_argument(std::string("gain bounds for ") + what +
                                  " must be finite with 0 <= lo < hi");
    }
  };
  check(kp_lo, kp_hi, "kp");
  check(kd_lo, kd_hi, "kd");
  if (!pd_only) check(ki_lo, ki_hi, "ki");
}

namespace {

PidGains gains_from_point(const GainSpace& space, const std::vector<double>& x) {
  return space.pd_only ? make_pd(x[0], x[1]) : PidGains{x[0], x[1], x[2]};
}

struct TuneEvaluation {
  StepMetrics metrics;
  double value = 0.0;
};

TuneEvaluation evaluate_gains(const TuneObjective& obj, const PidGains& g, bool pd_only) {
  Scenario sc = obj.scenario;
  if (pd_only) {
    sc.controller = PdControllerSpec{g};
  } else {
    sc.controller = PidControllerSpec{g};
  }
  const TrajectoryRecord tr = run_closed_loop(sc);
  TuneEvaluation ev;
  ev.metrics = compute_metrics(tr, sc.reference_theta, 2.0, sc.metric_window_start);
  if (ev.metrics.blew_up) {
    // Grade blow-ups by survival time so the search climbs toward stability.
    const double survived = tr.rows.empty() ? 0.0 : tr.rows.back().t;
    ev.value = 1e12 - 1e3 * survived;
  } else if (!ev.metrics.settling_time_2pct) {
    ev.value = 1e9 + ev.metrics.steady_state_error_pct;
  } else {
    ev.value = obj.settling_weight * *ev.metrics.settling_time_2pct +
               obj.overshoot_weight * ev.metrics.overshoot_pct +
               obj.sse_weight * ev.metrics.steady_state_error_pct;
  }
  return ev;
}

}  // namespace

TuneResult tune_gains(const TuneObjective& obj, const GainSpace& space, const PidGains& start,
                      long budget, std::uint64_t seed) {
  obj.validate();
  space.validate();
  start.validate();
  if (budget < 0) throw std::invalid_argument("tuning budget must be >= 0");

  if (budget == 0) {
    TuneResult result;
    result.gains = start;
    result.metrics = evaluate_gains(obj, start, space.pd_only).metrics;
    return result;
  }

  std::vector<double> x0;
  std::vector<std::pair<double, double>> bounds;
  if (space.pd_only) {
    x0 = {start.kp, start.kd};
    bounds = {{space.kp_lo, space.kp_hi}, {space.kd_lo, space.kd_hi}};
  } else {
    x0 = {start.kp, start.ki, start.kd};
    bounds = {{space.kp_lo, space.kp_hi},
              {space.ki_lo, space.ki_hi},
              {space.kd_lo, space.kd_hi}};
  }
  for (std::size_t i = 0; i < x0.size(); ++i) {
    x0[i] = std::clamp(x0[i], bounds[i].first, bounds[i].second);
  }

  const auto objective = [&](const std::vector<double>& x) {
    return evaluate_gains(obj, gains_from_point(space, x), space.pd_only).value;
  };

  std::mt19937_64 rng(seed);
  std::vector<double> best_x = x0;
  double best_value = std::numeric_limits<double>::infinity();
  bool converged = false;
  long evals = 0;
  constexpr int kMaxRestarts = 5;

  for (int r = 0; r < kMaxRestarts && evals < budget; ++r) {
    std::vector<double> attempt = x0;
    if (r > 0) {
      for (std::size_t i = 0; i < attempt.size(); ++i) {
        std::uniform_real_distribution<double> dist(bounds[i].first, bounds[i].second);
        attempt[i] = dist(rng);
      }
    }
    NelderMeadOptions opts;
    opts.max_iters = 10000;  // the evaluation cap is the real limit
    opts.max_evals = budget - evals;
    opts.simplex_tol = 1e-6;
    opts.target = 1e-12;
    const NelderMeadResult res = nelder_mead(objective, attempt, bounds, opts);
    evals += res.evaluations;
    if (res.value < best_value) {
      best_value = res.value;
      best_x = res.x;
      converged = res.converged;
    }
  }

  const PidGains best_gains = gains_from_point(space, best_x);
  const TuneEvaluation best_ev = evaluate_gains(obj, best_gains, space.pd_only);
  if (best_ev.metrics.blew_up || !best_ev.metrics.settling_time_2pct) {
    std::ostringstream msg;
    msg << "no stabilizing gains within budget " << budget << "; best candidate kp="
        << best_gains.kp << " ki=" << best_gains.ki << " kd=" << best_gains.kd
        << " objective=" << best_ev.value;
    throw numerical_error(msg.str());
  }

  TuneResult result;
  result.gains = best_gains;
  result.metrics = best_ev.metrics;
  result.objective_value = best_ev.value;
  result.evaluations = evals;
  result.converged = converged;
  return result;
}

}  // namespace pendctl
