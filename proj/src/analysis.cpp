#include "pendctl/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "pendctl/errors.hpp"

namespace pendctl {

void TransferFunction::validate() const {
  if (denominator.is_zero()) {
    throw std::invalid_argument("transfer function denominator is identically zero");
  }
  if (numerator.degree() > denominator.degree()) {
    throw std::invalid_argument("transfer function must be proper");
  }
}

std::vector<std::complex<double>> TransferFunction::poles() const {
  return find_roots(denominator);
}

std::vector<std::complex<double>> TransferFunction::zeros() const {
  if (numerator.is_zero() || numerator.degree() < 1) return {};
  return find_roots(numerator);
}

TransferFunction plant_transfer_function(const PhysicalParams& p) {
  p.validate();
  const double M = p.cart_mass, m = p.bob_mass, l = p.arm_length;
  const double I = p.pendulum_inertia, g = p.gravity, b = p.viscous_friction;
  const double q = p.coupling_determinant();

  TransferFunction tf;
  tf.numerator = Polynomial({m * l / q, 0.0});
  tf.denominator = Polynomial(
      {1.0, b * (I + m * l * l) / q, -(M + m) * m * g * l / q, -b * m * g * l / q});
  tf.validate();
  return tf;
}

StateSpaceModel plant_state_space(const PhysicalParams& p) {
  p.validate();
  const double M = p.cart_mass, m = p.bob_mass, l = p.arm_length;
  const double I = p.pendulum_inertia, g = p.gravity, b = p.viscous_friction;
  const double q = p.coupling_determinant();

  StateSpaceModel ss;
  ss.A = {{{0.0, 1.0, 0.0, 0.0},
           {0.0, -b * (I + m * l * l) / q, m * m * l * l * g / q, 0.0},
           {0.0, 0.0, 0.0, 1.0},
           {0.0, -b * m * l / q, (M + m) * m * g * l / q, 0.0}}};
  ss.B = {0.0, (I + m * l * l) / q, 0.0, m * l / q};
  ss.C = {{0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};  // theta, theta_dot
  ss.D = {0.0, 0.0};
  return ss;
}

TransferFunction augment_integrator(const TransferFunction& tf) {
  tf.validate();
  TransferFunction out = tf;
  out.denominator = tf.denominator * Polynomial({1.0, 0.0});
  return out;
}

namespace {

// Reorder `roots` so that entry i is the nearest unused root to prev[i].
// Ties go to the candidate with the smaller imaginary part.
std::vector<std::complex<double>> match_to_previous(
    const std::vector<std::complex<double>>& prev,
    std::vector<std::complex<double>> roots) {
  std::vector<std::complex<double>> out;
  out.reserve(roots.size());
  std::vector<bool> used(roots.size(), false);
  for (const auto& target : prev) {
    std::size_t best = roots.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[j] - target);
      if (d < best_d || (d == best_d && best < roots.size() &&
                         roots[j].imag() < roots[best].imag())) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    out.push_back(roots[best]);
  }
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (!used[j]) out.push_back(roots[j]);  // degree changed between samples
  }
  return out;
}

}  // namespace

std::vector<RootLocusSample> root_locus(const TransferFunction& tf,
                                        const TransferFunction& controller,
                                        const std::vector<double>& gains,
                                        int threads) {
  tf.validate();
  controller.validate();
  if (gains.empty()) throw std::invalid_argument("locus needs at least one gain");
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!(gains[i] > 0.0)) throw std::invalid_argument("locus gains must be > 0");
    if (i > 0 && gains[i] <= gains[i - 1]) {
      throw std::invalid_argument("locus gains must be sorted ascending");
    }
  }

  const Polynomial open_den = tf.denominator * controller.denominator;
  const Polynomial open_num = tf.numerator * controller.numerator;

  // Phase 1: solve each gain's closed-loop polynomial. The solves are
  // independent, so fanning out changes nothing but wall time; errors are
  // reported for the lowest failing gain either way.
  std::vector<std::vector<std::complex<double>>> raw(gains.size());
  std::vector<std::string> errors(gains.size());
  const auto solve_one = [&](std::size_t i) {
    try {
      raw[i] = find_roots(open_den + gains[i] * open_num);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "root locus failed at K = " << gains[i] << ": " << e.what();
      errors[i] = msg.str();
    }
  };

  const int workers =
      std::clamp<int>(threads, 1, static_cast<int>(std::min<std::size_t>(gains.size(), 64)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < gains.size(); ++i) solve_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < gains.size(); i = next.fetch_add(1)) {
          solve_one(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  for (const std::string& err : errors) {
    if (!err.empty()) throw numerical_error(err);
  }

  // Phase 2: order poles into contiguous branches, sequentially in K.
  std::vector<RootLocusSample> samples;
  samples.reserve(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    std::vector<std::complex<double>> roots = std::move(raw[i]);
    if (!samples.empty()) {
      roots = match_to_previous(samples.back().closed_loop_poles, std::move(roots));
    }
    samples.push_back(RootLocusSample{gains[i], std::move(roots)});
  }
  return samples;
}

DesignVerdict meets_design_targets(const std::vector<std::complex<double>>& poles) {
  if (poles.empty()) throw std::invalid_argument("pole list must be nonempty");

  double max_re = -std::numeric_limits<double>::infinity();
  double min_zeta = 1.0;  // real poles carry no oscillation
  for (const auto& s : poles) {
    max_re = std::max(max_re, s.real());
    if (s.imag() != 0.0) {
      min_zeta = std::min(min_zeta, -s.real() / std::abs(s));
    }
  }

  // 2% settling heuristic t_s ~ 4/|Re|; t_s < 0.1 s needs Re <= -40.
  // <= 2% overshoot needs damping ratio >= 0.78 on every complex pair.
  DesignVerdict v;
  v.stability_margin = -max_re;
  v.stable = max_re < 0.0;
  v.settling_margin = -40.0 - max_re;
  v.settling_ok = v.settling_margin >= 0.0;
  v.overshoot_margin = min_zeta - 0.78;
  v.overshoot_ok = v.overshoot_margin >= 0.0;
  return v;
}

Polynomial characteristic_polynomial(const std::array<std::array<double, 4>, 4>& a) {
  // Faddeev-LeVerrier: M_1 = A, c_1 = -tr(M_1),
  // M_{k+1} = A (M_k + c_k I), c_{k+1} = -tr(M_{k+1})/(k+1).
  using Mat = std::array<std::array<double, 4>, 4>;
  const auto mul = [](const Mat& x, const Mat& y) {
    Mat r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += x[i][k] * y[k][j];
        r[i][j] = s;
      }
    return r;
  };
  const auto trace = [](const Mat& x) {
    return x[0][0] + x[1][1] + x[2][2] + x[3][3];
  };

  std::vector<double> coeffs{1.0};
  Mat m = a;
  for (int k = 1; k <= 4; ++k) {
    const double c = -trace(m) / k;
    coeffs.push_back(c);
    if (k < 4) {
      Mat shifted = m;
      for (int i = 0; i < 4; ++i) shifted[i][i] += c;
      m = mul(a, shifted);
    }
  }
  return Polynomial(coeffs);
}

}  // namespace pendctl
