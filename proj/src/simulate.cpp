#include "pendctl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pendctl/errors.hpp"

namespace pendctl {

void Disturbance::validate() const {
  if (!std::isfinite(amplitude) || !std::isfinite(start_time) || !std::isfinite(width)) {
    throw std::invalid_argument("disturbance fields must be finite");
  }
  if (kind == Kind::impulse && !(width > 0.0)) {
    throw std::invalid_argument("impulse width must be > 0");
  }
}

double impulse_force(const Disturbance& d, double t) {
  d.validate();
  if (d.kind == Disturbance::Kind::none) return 0.0;
  return (t >= d.start_time && t < d.start_time + d.width) ? d.amplitude : 0.0;
}

void Scenario::validate() const {
  params.validate();
  disturbance.validate();
  limits.validate();
  if (!initial.finite()) throw std::invalid_argument("initial state must be finite");
  if (!std::isfinite(reference_theta)) {
    throw std::invalid_argument("reference_theta must be finite");
  }
  if (!(dt > 0.0) || !(duration > dt)) {
    throw std::invalid_argument("scenario requires duration > dt > 0");
  }
  if (!(metric_window_start < duration) || metric_window_start < 0.0) {
    throw std::invalid_argument("metric_window_start must lie in [0, duration)");
  }
  if (control_hold < 1) throw std::invalid_argument("control_hold must be >= 1");
}

namespace {

// Per-step controller dispatch; PID memory lives here as an explicit value.
class ControllerRuntime {
 public:
  explicit ControllerRuntime(const Scenario& sc) : sc_(sc) {}

  double compute(const PendulumState& s, double dt_control) {
    const double error = sc_.reference_theta - s.theta;
    return std::visit(
        [&](const auto& spec) { return step(spec, s, error, dt_control); },
        sc_.controller);
  }

 private:
  double step(const PidControllerSpec& spec, const PendulumState&, double error,
              double dt_control) {
    const PidOutput out = pid_step(spec.gains, pid_state_, error, dt_control, sc_.limits);
    pid_state_ = out.state;
    return out.u;
  }

  double step(const PdControllerSpec& spec, const PendulumState&, double error,
              double dt_control) {
    const PidGains pd = make_pd(spec.gains.kp, spec.gains.kd);
    const PidOutput out = pid_step(pd, pid_state_, error, dt_control, sc_.limits);
    pid_state_ = out.state;
    return out.u;
  }

  double step(const FuzzyDirectSpec& spec, const PendulumState& s, double,
              double) {
    const std::vector<double> out = spec.fis.evaluate({s.theta, s.theta_dot});
    return std::clamp(out[0], -sc_.limits.u_max, sc_.limits.u_max);
  }

  double step(const FuzzyScheduledPidSpec& spec, const PendulumState&, double error,
              double dt_control) {
    const std::vector<double> sched = spec.scheduler.evaluate({error});
    const PidGains gains{sched[0], spec.base.ki, sched[1]};
    const PidOutput out = pid_step(gains, pid_state_, error, dt_control, sc_.limits);
    pid_state_ = out.state;
    return out.u;
  }

  const Scenario& sc_;
  ControllerState pid_state_;
};

}  // namespace

TrajectoryRecord run_closed_loop(const Scenario& sc) {
  sc.validate();

  const long steps = static_cast<long>(std::floor(sc.duration / sc.dt + 1e-9));
  TrajectoryRecord record;
  record.dt = sc.dt;
  record.rows.reserve(static_cast<std::size_t>(steps) + 1);

  ControllerRuntime controller(sc);
  PendulumState state = sc.initial;
  const double dt_control = sc.dt * sc.control_hold;
  double u = 0.0;

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * sc.dt;
    if (k % sc.control_hold == 0) u = controller.compute(state, dt_control);
    const double d = impulse_force(sc.disturbance, t);
    record.rows.push_back(TrajectoryRow{t, state.x, state.x_dot, state.theta,
                                        state.theta_dot, u, d});
    if (k == steps) break;
    try {
      state = rk4_step(sc.params, state, ForceInput{u + d}, sc.dt, sc.model,
                       sc.drag_enabled);
    } catch (const numerical_error&) {
      record.blew_up = true;
      break;
    }
  }
  return record;
}

StepMetrics compute_metrics(const TrajectoryRecord& tr, double reference, double band_pct,
                            double window_start) {
  if (tr.rows.empty()) throw std::invalid_argument("empty trajectory record");
  if (!(band_pct > 0.0)) throw std::invalid_argument("band_pct must be > 0");

  if (tr.blew_up) {
    StepMetrics m;
    m.blew_up = true;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.overshoot_pct = nan;
    m.steady_state_error_pct = nan;
    m.peak_theta = nan;
    return m;
  }

  std::size_t first = 0;
  while (first < tr.rows.size() && tr.rows[first].t < window_start - 1e-12) ++first;
  if (first == tr.rows.size()) {
    throw std::invalid_argument("metric window excludes every trajectory row");
  }

  const auto dev = [&](std::size_t i) { return tr.rows[i].theta - reference; };

  double peak_abs = 0.0;
  std::size_t peak_idx = first;
  for (std::size_t i = first; i < tr.rows.size(); ++i) {
    if (std::abs(dev(i)) > peak_abs) {
      peak_abs = std::abs(dev(i));
      peak_idx = i;
    }
  }

  StepMetrics m;
  m.peak_theta = tr.rows[peak_idx].theta;

  // Percentage base: the peak excursion within the window. For a step-style
  // run this is the initial offset; for impulse rejection it is the
  // post-disturbance excursion, so one rule covers both.
  const double base = peak_abs;
  if (base < 1e-15) {
    m.settling_time_2pct = tr.rows[first].t;
    return m;  // trajectory sits on the reference throughout
  }
  const double initial_dev = dev(first);
  const double approach_sign = std::abs(initial_dev) > 1e-9 * base
                                   ? (initial_dev > 0.0 ? 1.0 : -1.0)
                                   : (dev(peak_idx) > 0.0 ? 1.0 : -1.0);

  const double band = band_pct / 100.0 * base;
  std::optional<std::size_t> last_outside;
  for (std::size_t i = first; i < tr.rows.size(); ++i) {
    if (std::abs(dev(i)) > band) last_outside = i;
  }
  if (!last_outside) {
    m.settling_time_2pct = tr.rows[first].t;
  } else if (*last_outside + 1 < tr.rows.size()) {
    m.settling_time_2pct = tr.rows[*last_outside + 1].t;
  }  // else: still outside the band at the end of the run

  double max_opposite = 0.0;
  for (std::size_t i = first; i < tr.rows.size(); ++i) {
    max_opposite = std::max(max_opposite, -approach_sign * dev(i));
  }
  m.overshoot_pct = 100.0 * max_opposite / base;

  const double t_end = tr.rows.back().t;
  const double tail_start = t_end - 0.1 * (t_end - tr.rows[first].t);
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = first; i < tr.rows.size(); ++i) {
    if (tr.rows[i].t >= tail_start - 1e-12) {
      acc += std::abs(dev(i));
      ++count;
    }
  }
  m.steady_state_error_pct = 100.0 * (acc / static_cast<double>(count)) / base;
  return m;
}

ComparisonTable compare_controllers(
    const std::vector<std::pair<std::string, Scenario>>& scenarios) {
  if (scenarios.size() < 2) {
    throw std::invalid_argument("comparison needs at least two scenarios");
  }
  const auto same_plant = [](const Scenario& a, const Scenario& b) {
    const PhysicalParams &pa = a.params, &pb = b.params;
    return pa.cart_mass == pb.cart_mass && pa.bob_mass == pb.bob_mass &&
           pa.arm_length == pb.arm_length && pa.pendulum_inertia == pb.pendulum_inertia &&
           pa.gravity == pb.gravity && pa.viscous_friction == pb.viscous_friction &&
           a.model == b.model && a.disturbance.kind == b.disturbance.kind &&
           a.disturbance.amplitude == b.disturbance.amplitude &&
           a.disturbance.start_time == b.disturbance.start_time &&
           a.disturbance.width == b.disturbance.width;
  };
  for (std::size_t i = 1; i < scenarios.size(); ++i) {
    if (!same_plant(scenarios[0].second, scenarios[i].second)) {
      throw std::invalid_argument("compared scenarios must share plant and disturbance");
    }
  }

  ComparisonTable table;
  for (const auto& [label, sc] : scenarios) {
    const TrajectoryRecord tr = run_closed_loop(sc);
    table.entries.push_back({label, compute_metrics(tr, sc.reference_theta, 2.0,
                                                    sc.metric_window_start)});
  }

  const auto winner = [&](auto key) -> std::string {
    std::string best;
    double best_v = std::numeric_limits<double>::infinity();
    for (const auto& e : table.entries) {
      const std::optional<double> v = key(e.metrics);
      if (v && *v < best_v) {
        best_v = *v;
        best = e.label;
      }
    }
    return best;
  };
  table.best_settling = winner([](const StepMetrics& m) { return m.settling_time_2pct; });
  table.best_overshoot = winner([](const StepMetrics& m) {
    return m.blew_up ? std::optional<double>{} : std::optional<double>{m.overshoot_pct};
  });
  table.best_sse = winner([](const StepMetrics& m) {
    return m.blew_up ? std::optional<double>{}
                     : std::optional<double>{m.steady_state_error_pct};
  });
  return table;
}

}  // namespace pendctl
