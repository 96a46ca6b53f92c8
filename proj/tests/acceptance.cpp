// Acceptance gate: each numbered check exercises one shipped guarantee
// end to end and prints a single PASS/FAIL line. Run with a number to
// execute one check (as the ctest entries do) or with no arguments for
// the full battery.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pendctl/analysis.hpp"
#include "pendctl/dynamics.hpp"
#include "pendctl/fuzzy.hpp"
#include "pendctl/identify.hpp"
#include "pendctl/pid.hpp"
#include "pendctl/polynomial.hpp"
#include "pendctl/presets.hpp"
#include "pendctl/serialize.hpp"
#include "pendctl/simulate.hpp"
#include "test_util.hpp"

using namespace pendctl;
using nlohmann::json;

namespace {

struct Failure {
  std::string detail;
};

void demand(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

PhysicalParams random_slaved_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> um(0.2, 1.5), ub(0.05, 0.8), ul(0.1, 0.9),
      uf(0.05, 2.0);
  PhysicalParams p;
  p.cart_mass = um(rng);
  p.bob_mass = ub(rng);
  p.arm_length = ul(rng);
  p.pendulum_inertia = p.bob_mass * p.arm_length * p.arm_length / 3.0;
  p.viscous_friction = uf(rng);
  return p;
}

// ---- 1: the shipped plant reproduces the published pole triple ------------

void criterion_1() {
  const std::vector<double> targets = benchmark_pole_targets();

  // Library route: recover parameters from scratch.
  const IdentResult res = identify(benchmark_ident_problem(), default_params());
  demand(res.converged, "identification did not converge");
  auto poles = plant_transfer_function(res.params).poles();
  std::vector<double> sorted_targets = targets;
  std::sort(sorted_targets.begin(), sorted_targets.end());
  for (std::size_t i = 0; i < poles.size(); ++i) {
    demand(std::abs(poles[i].real() - sorted_targets[i]) < 1e-3 &&
               std::abs(poles[i].imag()) < 1e-3,
           "identified pole " + fmt(poles[i].real()) + " misses target " +
               fmt(sorted_targets[i]));
  }

  // CLI route: the shipped config must reprint the same triple.
  const std::string bin = testutil::require_env("PENDCTL_BIN");
  const std::string cfg = testutil::require_env("PENDCTL_CONFIG_DIR") + "/benchmark_plant.json";
  testutil::ScratchDir scratch;
  const std::string out = scratch.file("report.json");
  const auto run = testutil::run_command(bin + " analyze --config '" + cfg + "' --out '" + out + "'");
  demand(run.exit_code == 0, "analyze exited " + std::to_string(run.exit_code));
  const json report = json::parse(read_file(out));
  std::vector<double> reals;
  for (const auto& p : report["poles"]) reals.push_back(p["re"].get<double>());
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i < reals.size(); ++i) {
    demand(std::abs(reals[i] - sorted_targets[i]) < 1e-3,
           "reported pole " + fmt(reals[i]) + " misses target " + fmt(sorted_targets[i]));
  }
}

// ---- 2: third order, one origin zero, exactly one unstable pole -----------

void criterion_2() {
  std::mt19937 rng(20240816);
  for (int trial = 0; trial < 100; ++trial) {
    const PhysicalParams p = random_slaved_params(rng);
    const TransferFunction tf = plant_transfer_function(p);

    const auto poles = tf.poles();
    demand(poles.size() == 3, "expected 3 poles, got " + std::to_string(poles.size()));

    const auto zeros = tf.zeros();
    demand(zeros.size() == 1, "expected 1 zero, got " + std::to_string(zeros.size()));
    demand(std::abs(zeros[0]) < 1e-12, "zero not at the origin");

    int unstable = 0;
    for (const auto& pole : poles) {
      if (pole.real() > 0.0) {
        ++unstable;
        demand(std::abs(pole.imag()) < 1e-9, "unstable pole is not purely real");
      }
    }
    demand(unstable == 1,
           "trial " + std::to_string(trial) + ": " + std::to_string(unstable) +
               " unstable poles");
  }
}

// ---- 3: integrator augmentation ------------------------------------------

void criterion_3() {
  const auto check = [](const PhysicalParams& p) {
    const TransferFunction tf = plant_transfer_function(p);
    const TransferFunction aug = augment_integrator(tf);
    demand(aug.denominator.degree() == 4, "augmented denominator is not 4th order");

    auto expected = tf.poles();
    expected.emplace_back(0.0, 0.0);
    const double dist = testutil::match_distance(aug.poles(), expected);
    demand(dist < 1e-9, "augmented poles drifted by " + fmt(dist));
  };

  check(benchmark_params());
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) check(random_slaved_params(rng));
}

// ---- 4: tuned PD settles faster than tuned PID, overshoot < 2% ------------

void criterion_4() {
  const Scenario sc = balance_scenario(benchmark_params());
  const TuneObjective objective = default_tune_objective(sc);

  const TuneResult pd = tune_gains(objective, default_gain_space(true), shipped_pd_gains(),
                                   kDefaultTuneBudget, kDefaultSeed);
  const TuneResult pid = tune_gains(objective, default_gain_space(false), shipped_pid_gains(),
                                    kDefaultTuneBudget, kDefaultSeed);

  demand(pd.metrics.settling_time_2pct.has_value(), "tuned PD never settles");
  demand(pid.metrics.settling_time_2pct.has_value(), "tuned PID never settles");
  const double t_pd = *pd.metrics.settling_time_2pct;
  const double t_pid = *pid.metrics.settling_time_2pct;
  demand(t_pd < t_pid, "PD settling " + fmt(t_pd) + " s is not below PID " + fmt(t_pid) + " s");
  demand(pd.metrics.overshoot_pct < 2.0,
         "PD overshoot " + fmt(pd.metrics.overshoot_pct) + "% exceeds 2%");
  demand(pd.gains.ki == 0.0, "PD tuner produced an integral term");
}

// ---- 5: impulse rejection holds steady-state error < 2% at 25 s -----------

void criterion_5() {
  Scenario sc = impulse_scenario(benchmark_params());
  sc.controller = PdControllerSpec{shipped_pd_gains()};
  const TrajectoryRecord tr = run_closed_loop(sc);
  demand(!tr.blew_up, "impulse run diverged");
  demand(std::abs(tr.rows.back().t - 25.0) < 1e-9, "run did not reach 25 s");

  const StepMetrics m = compute_metrics(tr, sc.reference_theta, 2.0, sc.metric_window_start);
  demand(m.steady_state_error_pct < 2.0,
         "steady-state error " + fmt(m.steady_state_error_pct) + "% at 25 s exceeds 2%");
  demand(m.settling_time_2pct.has_value(), "impulse response never settles");
}

// ---- 6: fuzzy controller stabilizes; surface is odd ------------------------

void criterion_6() {
  Scenario sc = balance_scenario(default_params());
  sc.model = PlantModel::nonlinear;
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  sc.controller = FuzzyDirectSpec{fis};

  const TrajectoryRecord tr = run_closed_loop(sc);
  demand(!tr.blew_up, "fuzzy balance run diverged");
  const StepMetrics m = compute_metrics(tr, 0.0, 2.0, sc.metric_window_start);
  demand(m.settling_time_2pct.has_value(), "fuzzy loop never settles");
  demand(*m.settling_time_2pct < 5.0,
         "fuzzy settling " + fmt(*m.settling_time_2pct) + " s is not below 5 s");

  const SurfaceTable table = export_surface(fis, 101);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const auto& row = table.rows[static_cast<std::size_t>(i * 101 + j)];
      const auto& mirror = table.rows[static_cast<std::size_t>((100 - i) * 101 + (100 - j))];
      worst = std::max(worst, std::abs(row[2] + mirror[2]));
    }
  }
  demand(worst < 1e-6 * 20.0, "surface odd-symmetry error " + fmt(worst));
}

// ---- 7: numerical hygiene ---------------------------------------------------

void criterion_7() {
  // RK4 observed order between 3.7 and 4.3.
  PhysicalParams fl;
  fl.viscous_friction = 0.0;
  fl.motor_friction_alpha = 0.0;
  const auto theta_at_end = [&fl](double dt) {
    PendulumState s;
    s.theta = 2.0;
    const long steps = std::lround(2.0 / dt);
    for (long k = 0; k < steps; ++k) {
      s = rk4_step(fl, s, ForceInput{0.0}, dt, PlantModel::nonlinear);
    }
    return s.theta;
  };
  const double ref = theta_at_end(1e-4);
  const double e4 = std::abs(theta_at_end(4e-3) - ref);
  const double e2 = std::abs(theta_at_end(2e-3) - ref);
  const double e1 = std::abs(theta_at_end(1e-3) - ref);
  for (const double order : {std::log2(e4 / e2), std::log2(e2 / e1)}) {
    demand(order > 3.7 && order < 4.3, "observed RK4 order " + fmt(order));
  }

  // Frictionless energy drift below 1e-6 over 10 s.
  PendulumState s;
  s.theta = 2.5;
  const double e0 = mechanical_energy(fl, s);
  double drift = 0.0;
  for (int k = 0; k < 10000; ++k) {
    s = rk4_step(fl, s, ForceInput{0.0}, 1e-3, PlantModel::nonlinear);
    drift = std::max(drift, std::abs(mechanical_energy(fl, s) - e0) / std::abs(e0));
  }
  demand(drift < 1e-6, "energy drift " + fmt(drift));

  // Every root reported on a polynomial batch meets the residual bound.
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  std::vector<Polynomial> batch = {
      plant_transfer_function(default_params()).denominator,
      plant_transfer_function(benchmark_params()).denominator,
      characteristic_polynomial(plant_state_space(default_params()).A)};
  for (int i = 0; i < 50; ++i) {
    std::vector<double> c(5);
    for (auto& v : c) v = coeff(rng);
    if (std::abs(c[0]) < 0.5) c[0] = 1.0;
    batch.emplace_back(c);
  }
  for (const auto& p : batch) {
    const double bound = root_residual_bound(p);
    for (const auto& r : find_roots(p)) {
      demand(std::abs(p(r)) < bound,
             "residual " + fmt(std::abs(p(r))) + " breaches bound " + fmt(bound));
    }
  }

  // Linear and nonlinear accelerations agree within 1% near upright.
  PhysicalParams agree = default_params();
  agree.motor_friction_alpha = 0.0;
  for (double theta = -0.05; theta <= 0.0501; theta += 0.0125) {
    for (double theta_dot : {-0.1, 0.0, 0.1}) {
      for (double u : {-1.0, 0.0, 1.0}) {
        PendulumState st;
        st.theta = theta;
        st.theta_dot = theta_dot;
        const auto lin = accel_linear(agree, st, ForceInput{u});
        const auto nl = accel_nonlinear(agree, st, ForceInput{u});
        const double scale_x = std::max(std::abs(lin.x_ddot), 0.5);
        const double scale_t = std::max(std::abs(lin.theta_ddot), 0.5);
        demand(std::abs(lin.x_ddot - nl.x_ddot) <= 0.01 * scale_x,
               "cart acceleration mismatch at theta=" + fmt(theta));
        demand(std::abs(lin.theta_ddot - nl.theta_ddot) <= 0.01 * scale_t,
               "pendulum acceleration mismatch at theta=" + fmt(theta));
      }
    }
  }
}

// ---- 8: identification round trip, 20/20 -----------------------------------

void criterion_8() {
  std::mt19937 rng(88);
  std::uniform_real_distribution<double> perturb(-0.2, 0.2);
  int done = 0;
  while (done < 20) {
    const PhysicalParams truth = random_slaved_params(rng);
    const auto poles = plant_transfer_function(truth).poles();
    std::vector<double> targets;
    bool all_real = true;
    for (const auto& p : poles) {
      if (std::abs(p.imag()) > 1e-9) all_real = false;
      targets.push_back(p.real());
    }
    if (!all_real) continue;  // real-valued targets only; resample

    IdentProblem prob;
    prob.target_poles = targets;
    prob.free_params = {{"cart_mass", 0.1, 2.0},
                        {"bob_mass", 0.01, 1.0},
                        {"arm_length", 0.05, 1.0},
                        {"viscous_friction", 0.01, 5.0}};
    prob.fixed = truth;
    prob.restarts = 4;
    prob.seed = static_cast<std::uint64_t>(1000 + done);

    PhysicalParams start = truth;
    start.cart_mass = std::clamp(truth.cart_mass * (1.0 + perturb(rng)), 0.1, 2.0);
    start.bob_mass = std::clamp(truth.bob_mass * (1.0 + perturb(rng)), 0.01, 1.0);
    start.arm_length = std::clamp(truth.arm_length * (1.0 + perturb(rng)), 0.05, 1.0);
    start.viscous_friction =
        std::clamp(truth.viscous_friction * (1.0 + perturb(rng)), 0.01, 5.0);

    const IdentResult res = identify(prob, start);
    std::vector<double> sorted_targets = targets;
    std::sort(sorted_targets.begin(), sorted_targets.end());
    const auto recovered = plant_transfer_function(res.params).poles();
    for (std::size_t i = 0; i < recovered.size(); ++i) {
      const double err = std::abs(recovered[i] - std::complex<double>(sorted_targets[i], 0.0));
      demand(err < 1e-4, "trial " + std::to_string(done) + ": pole error " + fmt(err));
    }
    ++done;
  }
}

// ---- 9: determinism across processes ----------------------------------------

void criterion_9() {
  const std::string bin = testutil::require_env("PENDCTL_BIN");
  testutil::ScratchDir scratch;

  const std::string a = scratch.file("a.csv");
  const std::string b = scratch.file("b.csv");
  for (const auto& [path, label] : {std::pair{a, "first"}, std::pair{b, "second"}}) {
    const auto run = testutil::run_command(
        bin + " simulate --duration 5 --out '" + path + "'");
    demand(run.exit_code == 0,
           std::string(label) + " simulate exited " + std::to_string(run.exit_code));
  }
  demand(read_file(a) == read_file(b), "repeated simulate CSVs differ");

  const std::string ia = scratch.file("ia.json");
  const std::string ib = scratch.file("ib.json");
  for (const auto& path : {ia, ib}) {
    const auto run = testutil::run_command(
        bin + " identify --poles 3.8286,-3.8844,-0.8989 --seed 7 --out '" + path + "'");
    demand(run.exit_code == 0, "identify exited " + std::to_string(run.exit_code));
  }
  demand(read_file(ia) == read_file(ib), "fixed-seed identify JSONs differ");

  const std::string ta = scratch.file("ta.json");
  const std::string tb = scratch.file("tb.json");
  for (const auto& path : {ta, tb}) {
    const auto run = testutil::run_command(
        bin + " tune --pd --budget 60 --seed 5 --out '" + path + "'");
    demand(run.exit_code == 0, "tune exited " + std::to_string(run.exit_code));
  }
  demand(read_file(ta) == read_file(tb), "fixed-seed tune JSONs differ");
}

const std::vector<std::pair<std::function<void()>, std::string>> kCriteria = {
    {criterion_1, "shipped plant reproduces the benchmark pole triple within 1e-3"},
    {criterion_2, "every plant is 3rd order with one origin zero and one real unstable pole"},
    {criterion_3, "integrator augmentation adds exactly one origin pole"},
    {criterion_4, "tuned PD settles faster than tuned PID and overshoots < 2%"},
    {criterion_5, "impulse steady-state error < 2% over a 25 s horizon"},
    {criterion_6, "fuzzy controller settles < 5 s; surface odd to 1e-6 of full scale"},
    {criterion_7, "RK4 order, energy drift, root residuals, small-angle agreement"},
    {criterion_8, "20/20 random plants re-identified to 1e-4 pole accuracy"},
    {criterion_9, "byte-identical CSV and fixed-seed JSON across repeated runs"},
};

int run_criterion(int n) {
  const auto& [fn, label] = kCriteria[static_cast<std::size_t>(n - 1)];
  try {
    fn();
    std::cout << "criterion " << n << ": PASS — " << label << "\n";
    return 0;
  } catch (const Failure& f) {
    std::cout << "criterion " << n << ": FAIL — " << f.detail << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "criterion " << n << ": FAIL — unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::cerr << "usage: acceptance [1.." << kCriteria.size() << "]\n";
      return 2;
    }
    return run_criterion(n);
  }
  int failures = 0;
  for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) {
    failures += run_criterion(n);
  }
  return failures == 0 ? 0 : 1;
}
