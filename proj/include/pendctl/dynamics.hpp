#pragma once

namespace pendctl {

/// Cart-pendulum physical parameters, including the lumped friction data.
/// Only the viscous cart coefficient b enters the linearized plant; the
/// pivot torque alpha*theta_dot acts in the nonlinear model, and the
/// Coulomb/drag coefficients are carried for reporting and the optional
/// drag term.
struct PhysicalParams {
  double cart_mass = 0.5;            // M (kg)
  double bob_mass = 0.2;             // m (kg)
  double arm_length = 0.3;           // l (m), pivot to bob center
  double pendulum_inertia = 0.006;   // I (kg m^2), about the bob's center of mass
  double gravity = 9.8;              // g (m/s^2)
  double viscous_friction = 0.1;     // b (N s/m), cart-ground viscous coefficient
  double motor_friction_alpha = 0.01;  // alpha (N m s/rad), pivot viscous torque
  double wheel_ground_mu = 0.76;     // rubber on nylon carpet, dimensionless
  double gear_mu = 0.2;              // plastic gear on gear, dimensionless
  double drag_cd = 0.8;              // drag coefficient of the bob, dimensionless

  /// Coupling determinant D = (M+m)(I+m l^2) - m^2 l^2. Positive for any
  /// valid parameter set.
  double coupling_determinant() const;

  /// Throws std::invalid_argument if any invariant is violated
  /// (positivity, finiteness, D > 0).
  void validate() const;
};

/// Plant state: cart position/velocity and pendulum angle/rate.
/// theta is measured from the upright equilibrium; theta = 0 is upright.
struct PendulumState {
  double x = 0.0;          // m
  double x_dot = 0.0;      // m/s
  double theta = 0.0;      // rad
  double theta_dot = 0.0;  // rad/s

  bool finite() const;
};

/// Horizontal force on the cart (N).
struct ForceInput {
  double u = 0.0;
};

struct Accel {
  double x_ddot = 0.0;      // m/s^2
  double theta_ddot = 0.0;  // rad/s^2
};

enum class PlantModel { linear, nonlinear };

/// Accelerations of the plant linearized about upright:
///   x_ddot     = [(I+m l^2)(u - b x_dot) + m^2 l^2 g theta] / D
///   theta_ddot = [m l (u - b x_dot) + (M+m) m g l theta] / D
Accel accel_linear(const PhysicalParams& p, const PendulumState& s, ForceInput u);

/// Full nonlinear accelerations (sin/cos coupling, centripetal term,
/// pivot torque -alpha*theta_dot, optional quadratic bob drag).
Accel accel_nonlinear(const PhysicalParams& p, const PendulumState& s, ForceInput u,
                      bool with_drag = false);

/// Classical RK4 step with u held constant over the step (zero-order hold).
/// dt must lie in (0, 0.05]. Throws numerical_error if the result is not
/// finite, signalling blow-up to the caller.
PendulumState rk4_step(const PhysicalParams& p, const PendulumState& s, ForceInput u,
                       double dt, PlantModel model, bool with_drag = false);

struct FrictionReport {
  double cart_friction = 0.0;  // N, -b * x_dot
  double pivot_torque = 0.0;   // N m, -alpha * theta_dot
};

/// Viscous friction terms at the current state, reported separately so a
/// simulation can show which channels are active.
FrictionReport friction_force(const PhysicalParams& p, const PendulumState& s);

/// Mechanical energy of the unforced nonlinear plant (kinetic + potential,
/// zero at the upright rest state minus m g l). Conserved when b, alpha and
/// drag are all zero.
double mechanical_energy(const PhysicalParams& p, const PendulumState& s);

}  // namespace pendctl
