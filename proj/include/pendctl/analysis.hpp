#pragma once

#include <array>
#include <complex>
#include <vector>

#include "pendctl/dynamics.hpp"
#include "pendctl/polynomial.hpp"

namespace pendctl {

/// Proper rational transfer function num(s)/den(s).
struct TransferFunction {
  Polynomial numerator;
  Polynomial denominator;

  /// Throws std::invalid_argument if the denominator is identically zero
  /// or the function is improper.
  void validate() const;

  std::vector<std::complex<double>> poles() const;
  std::vector<std::complex<double>> zeros() const;
};

/// Continuous-time state-space model over the state (x, x_dot, theta, theta_dot).
struct StateSpaceModel {
  std::array<std::array<double, 4>, 4> A{};
  std::array<double, 4> B{};
  std::vector<std::array<double, 4>> C;  // output selector rows
  std::vector<double> D;                 // one zero per output row
};

/// Closed-loop pole set sampled at one feedback gain.
struct RootLocusSample {
  double gain = 0.0;
  std::vector<std::complex<double>> closed_loop_poles;
};

/// theta(s)/U(s) of the upright-linearized plant:
///   (m l / q) s / [s^3 + (b(I+m l^2)/q) s^2 - ((M+m) m g l / q) s - (b m g l / q)]
/// with q the coupling determinant. One zero at the origin, cubic denominator.
TransferFunction plant_transfer_function(const PhysicalParams& p);

/// State-space realization of the same linearization. C selects theta and
/// theta_dot (both are fed back in the fuzzy loop).
StateSpaceModel plant_state_space(const PhysicalParams& p);

/// Multiplies the denominator by s, adding one pole at the origin.
TransferFunction augment_integrator(const TransferFunction& tf);

/// Closed-loop poles of den(tf) den(c) + K num(tf) num(c) for each gain.
/// Gains must be strictly positive and ascending. Within each sample the
/// poles are ordered by nearest-neighbor matching against the previous
/// sample (ties broken by ascending imaginary part) so branches stay
/// contiguous across rows. With threads > 1 the per-gain root solves run
/// on a worker pool; the result is identical to the sequential one.
std::vector<RootLocusSample> root_locus(const TransferFunction& tf,
                                        const TransferFunction& controller,
                                        const std::vector<double>& gains,
                                        int threads = 1);

/// Pole-domain verdict against the closed-loop design targets:
/// stability (all Re < 0), 2% settling under 0.1 s via the 4/|Re| heuristic
/// (dominant Re <= -40), and <= 2% overshoot via damping ratio >= 0.78 for
/// every complex pair. Margins are positive when the target is met.
struct DesignVerdict {
  bool stable = false;
  double stability_margin = 0.0;  // -max Re
  bool settling_ok = false;
  double settling_margin = 0.0;  // -40 - max Re
  bool overshoot_ok = false;
  double overshoot_margin = 0.0;  // min zeta - 0.78
  bool all_ok() const { return stable && settling_ok && overshoot_ok; }
};

DesignVerdict meets_design_targets(const std::vector<std::complex<double>>& poles);

/// Characteristic polynomial of a 4x4 matrix (Faddeev-LeVerrier).
Polynomial characteristic_polynomial(const std::array<std::array<double, 4>, 4>& a);

}  // namespace pendctl
