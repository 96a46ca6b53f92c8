#pragma once

#include <utility>

namespace pendctl {

struct PidGains {
  double kp = 0.0;  // N/rad
  double ki = 0.0;  // N/(rad s)
  double kd = 0.0;  // N s/rad

  void validate() const;
};

/// PD gains: a PID with the integral part eliminated. pid_step never
/// accumulates integral state when ki is zero.
PidGains make_pd(double kp, double kd);

/// Controller memory threaded explicitly through pid_step calls.
struct ControllerState {
  double integral_accum = 0.0;      // rad s
  double prev_error = 0.0;          // rad
  double deriv_filter_state = 0.0;  // rad/s
  bool initialized = false;
};

ControllerState reset(const ControllerState&);

struct ActuatorLimits {
  double u_max = 20.0;  // N, symmetric saturation

  void validate() const;
};

struct PidOutput {
  double u = 0.0;
  ControllerState state;
};

/// One discrete PID update:
///   u = sat(kp e + ki * trapezoidal integral + kd * filtered derivative)
/// The integral uses conditional (clamping) anti-windup: accumulation halts
/// while the output is saturated in the error's direction. The derivative
/// is a backward difference through a first-order low-pass with time
/// constant derivative_filter_n * dt; the first call emits zero derivative.
PidOutput pid_step(const PidGains& g, const ControllerState& st, double error, double dt,
                   const ActuatorLimits& lim, double derivative_filter_n = 10.0);

}  // namespace pendctl
