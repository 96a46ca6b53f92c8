#include "pendctl/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "pendctl/errors.hpp"

namespace pendctl {

double PhysicalParams::coupling_determinant() const {
  const double ml = bob_mass * arm_length;
  return (cart_mass + bob_mass) * (pendulum_inertia + ml * arm_length) - ml * ml;
}

void PhysicalParams::validate() const {
  const auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(cart_mass) || bad(bob_mass) || bad(arm_length) || bad(pendulum_inertia) ||
      bad(gravity) || bad(viscous_friction) || bad(motor_friction_alpha) ||
      bad(wheel_ground_mu) || bad(gear_mu) || bad(drag_cd)) {
    throw std::invalid_argument("physical parameters must be finite");
  }
  if (cart_mass <= 0.0) throw std::invalid_argument("cart_mass must be > 0");
  if (bob_mass <= 0.0) throw std::invalid_argument("bob_mass must be > 0");
  if (arm_length <= 0.0) throw std::invalid_argument("arm_length must be > 0");
  if (pendulum_inertia < 0.0) throw std::invalid_argument("pendulum_inertia must be >= 0");
  if (gravity <= 0.0) throw std::invalid_argument("gravity must be > 0");
  if (viscous_friction < 0.0) throw std::invalid_argument("viscous_friction must be >= 0");
  if (motor_friction_alpha < 0.0) throw std::invalid_argument("motor_friction_alpha must be >= 0");
  if (wheel_ground_mu < 0.0) throw std::invalid_argument("wheel_ground_mu must be >= 0");
  if (gear_mu < 0.0) throw std::invalid_argument("gear_mu must be >= 0");
  if (drag_cd < 0.0) throw std::invalid_argument("drag_cd must be >= 0");
  if (coupling_determinant() <= 0.0) {
    throw std::invalid_argument("coupling determinant must be > 0");
  }
}

bool PendulumState::finite() const {
  return std::isfinite(x) && std::isfinite(x_dot) && std::isfinite(theta) &&
         std::isfinite(theta_dot);
}

namespace {

void check_inputs(const PhysicalParams& p, const PendulumState& s, ForceInput u) {
  p.validate();
  if (!s.finite()) throw std::invalid_argument("state must be finite");
  if (!std::isfinite(u.u)) throw std::invalid_argument("force input must be finite");
}

}  // namespace

Accel accel_linear(const PhysicalParams& p, const PendulumState& s, ForceInput u) {
  check_inputs(p, s, u);
  const double M = p.cart_mass, m = p.bob_mass, l = p.arm_length;
  const double I = p.pendulum_inertia, g = p.gravity, b = p.viscous_friction;
  const double D = p.coupling_determinant();
  const double drive = u.u - b * s.x_dot;
  Accel a;
  a.x_ddot = ((I + m * l * l) * drive + m * m * l * l * g * s.theta) / D;
  a.theta_ddot = (m * l * drive + (M + m) * m * g * l * s.theta) / D;
  return a;
}

Accel accel_nonlinear(const PhysicalParams& p, const PendulumState& s, ForceInput u,
                      bool with_drag) {
  check_inputs(p, s, u);
  const double M = p.cart_mass, m = p.bob_mass, l = p.arm_length;
  const double I = p.pendulum_inertia, g = p.gravity, b = p.viscous_friction;
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  const double ml = m * l;

  // Coupled equations, bob at (x - l sin(theta), l cos(theta)):
  //   (M+m) x_ddot - m l cos(theta) theta_ddot = u - b x_dot - m l theta_dot^2 sin(theta)
  //   -m l cos(theta) x_ddot + (I+m l^2) theta_ddot = m g l sin(theta) + pivot torque
  double torque = m * g * l * st - p.motor_friction_alpha * s.theta_dot;
  if (with_drag) {
    torque -= 0.5 * p.drag_cd * l * s.theta_dot * std::abs(s.theta_dot);
  }
  const double rhs_x = u.u - b * s.x_dot - ml * s.theta_dot * s.theta_dot * st;

  const double a11 = M + m, a12 = -ml * ct;
  const double a22 = I + ml * l;
  const double det = a11 * a22 - a12 * a12;  // >= coupling determinant > 0

  Accel a;
  a.x_ddot = (a22 * rhs_x - a12 * torque) / det;
  a.theta_ddot = (a11 * torque - a12 * rhs_x) / det;
  return a;
}

PendulumState rk4_step(const PhysicalParams& p, const PendulumState& s, ForceInput u,
                       double dt, PlantModel model, bool with_drag) {
  if (!(dt > 0.0) || dt > 0.05) {
    throw std::invalid_argument("rk4_step requires 0 < dt <= 0.05 s");
  }
  if (!s.finite()) throw std::invalid_argument("state must be finite");
  const auto deriv = [&](const PendulumState& st) {
    // A non-finite stage state means the step itself overflowed (the caller's
    // state was checked above), so report it as divergence, not misuse.
    if (!st.finite()) {
      throw numerical_error("integration step produced a non-finite state");
    }
    const Accel a = model == PlantModel::linear ? accel_linear(p, st, u)
                                                : accel_nonlinear(p, st, u, with_drag);
    return PendulumState{st.x_dot, a.x_ddot, st.theta_dot, a.theta_ddot};
  };
  const auto shift = [](const PendulumState& st, const PendulumState& d, double h) {
    return PendulumState{st.x + h * d.x, st.x_dot + h * d.x_dot, st.theta + h * d.theta,
                         st.theta_dot + h * d.theta_dot};
  };

  const PendulumState k1 = deriv(s);
  const PendulumState k2 = deriv(shift(s, k1, dt / 2.0));
  const PendulumState k3 = deriv(shift(s, k2, dt / 2.0));
  const PendulumState k4 = deriv(shift(s, k3, dt));

  PendulumState out;
  out.x = s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.x_dot = s.x_dot + dt / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
  out.theta = s.theta + dt / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
  out.theta_dot =
      s.theta_dot + dt / 6.0 * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot);

  if (!out.finite()) {
    throw numerical_error("integration step produced a non-finite state");
  }
  return out;
}

FrictionReport friction_force(const PhysicalParams& p, const PendulumState& s) {
  p.validate();
  if (!s.finite()) throw std::invalid_argument("state must be finite");
  return FrictionReport{-p.viscous_friction * s.x_dot,
                        -p.motor_friction_alpha * s.theta_dot};
}

double mechanical_energy(const PhysicalParams& p, const PendulumState& s) {
  const double M = p.cart_mass, m = p.bob_mass, l = p.arm_length, I = p.pendulum_inertia;
  const double kinetic = 0.5 * (M + m) * s.x_dot * s.x_dot -
                         m * l * std::cos(s.theta) * s.x_dot * s.theta_dot +
                         0.5 * (I + m * l * l) * s.theta_dot * s.theta_dot;
  const double potential = m * p.gravity * l * std::cos(s.theta);
  return kinetic + potential;
}

}  // namespace pendctl
