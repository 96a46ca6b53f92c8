#include "pendctl/presets.hpp"

namespace pendctl {

PhysicalParams default_params() { return PhysicalParams{}; }

std::vector<double> benchmark_pole_targets() { return {3.8286, -3.8844, -0.8989}; }

PhysicalParams benchmark_params() {
  PhysicalParams p;
  p.cart_mass = 0.5;
  p.bob_mass = 0.039771307866283585;
  p.arm_length = 0.52490286203291625;
  p.pendulum_inertia = 0.003652636878907932;  // bob_mass*arm_length^2/3
  p.viscous_friction = 0.48684241690498525;
  return p;
}

IdentProblem benchmark_ident_problem() {
  IdentProblem prob;
  prob.target_poles = benchmark_pole_targets();
  prob.free_params = {{"cart_mass", 0.1, 2.0},
                      {"bob_mass", 0.01, 1.0},
                      {"arm_length", 0.05, 1.0},
                      {"viscous_friction", 0.01, 5.0}};
  prob.slave_inertia = true;
  prob.restarts = 5;
  prob.seed = kDefaultSeed;
  return prob;
}

Scenario balance_scenario(const PhysicalParams& p) {
  Scenario sc;
  sc.params = p;
  sc.initial.theta = 0.1;
  sc.duration = 5.0;
  sc.dt = 0.001;
  return sc;
}

Scenario impulse_scenario(const PhysicalParams& p) {
  Scenario sc;
  sc.params = p;
  sc.disturbance.kind = Disturbance::Kind::impulse;
  sc.disturbance.amplitude = 1.0;
  sc.disturbance.start_time = 1.0;
  sc.disturbance.width = 0.1;
  sc.duration = 25.0;
  sc.dt = 0.001;
  return sc;
}

TuneObjective default_tune_objective(const Scenario& sc) {
  TuneObjective obj;
  obj.scenario = sc;
  return obj;
}

GainSpace default_gain_space(bool pd_only) {
  GainSpace space;
  space.pd_only = pd_only;
  return space;
}

PidGains shipped_pd_gains() { return make_pd(199.99999933046306, 11.189458967978979); }

PidGains shipped_pid_gains() {
  return PidGains{188.76669327399964, 4.7327082721712355, 11.075658603688115};
}

}  // namespace pendctl
