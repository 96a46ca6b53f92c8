#include "pendctl/pid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pendctl {

void PidGains::validate() const {
  if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd)) {
    throw std::invalid_argument("gains must be finite");
  }
  if (kp < 0.0 || ki < 0.0 || kd < 0.0) {
    throw std::invalid_argument("gains must be >= 0");
  }
}

PidGains make_pd(double kp, double kd) {
  PidGains g{kp, 0.0, kd};
  g.validate();
  return g;
}

ControllerState reset(const ControllerState&) { return ControllerState{}; }

void ActuatorLimits::validate() const {
  if (!(u_max > 0.0) || !std::isfinite(u_max)) {
    throw std::invalid_argument("u_max must be > 0");
  }
}

PidOutput pid_step(const PidGains& g, const ControllerState& st, double error, double dt,
                   const ActuatorLimits& lim, double derivative_filter_n) {
  g.validate();
  lim.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!std::isfinite(error)) throw std::invalid_argument("error must be finite");
  if (!std::isfinite(st.integral_accum) || !std::isfinite(st.prev_error) ||
      !std::isfinite(st.deriv_filter_state)) {
    throw std::invalid_argument("controller state must be finite");
  }
  if (derivative_filter_n < 0.0) {
    throw std::invalid_argument("derivative filter constant must be >= 0");
  }

  ControllerState next = st;

  const double raw_deriv = st.initialized ? (error - st.prev_error) / dt : 0.0;
  // First-order low-pass with time constant N*dt; N = 0 passes raw through.
  const double tau = derivative_filter_n * dt;
  next.deriv_filter_state =
      st.deriv_filter_state + (raw_deriv - st.deriv_filter_state) * (dt / (tau + dt));

  double integral = st.integral_accum;
  if (g.ki > 0.0) {
    double candidate = integral + 0.5 * dt * (error + st.prev_error);
    // Never let the integral term alone exceed the actuator range.
    const double cap = lim.u_max / g.ki;
    candidate = std::clamp(candidate, -cap, cap);
    const double unsat = g.kp * error + g.ki * candidate + g.kd * next.deriv_filter_state;
    const bool saturating_same_side =
        std::abs(unsat) > lim.u_max && unsat * error > 0.0;
    if (!saturating_same_side) integral = candidate;
  }
  next.integral_accum = integral;
  next.prev_error = error;
  next.initialized = true;

  const double u_unsat = g.kp * error + g.ki * integral + g.kd * next.deriv_filter_state;
  PidOutput out;
  out.u = std::clamp(u_unsat, -lim.u_max, lim.u_max);
  out.state = next;
  return out;
}

}  // namespace pendctl
