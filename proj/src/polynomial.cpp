#include "pendctl/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pendctl/errors.hpp"

namespace pendctl {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (!all_finite(coeffs_)) {
    throw std::invalid_argument("polynomial coefficients must be finite");
  }
  // Strip exact leading zeros; identically-zero collapses to {0}.
  std::size_t first = 0;
  while (first + 1 < coeffs_.size() && coeffs_[first] == 0.0) ++first;
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(first));
  if (coeffs_.empty()) coeffs_ = {0.0};
}

double Polynomial::inf_norm() const {
  double mx = 0.0;
  for (double c : coeffs_) mx = std::max(mx, std::abs(c));
  return mx;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (double c : coeffs_) acc = acc * x + c;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (double c : coeffs_) acc = acc * z + c;
  return acc;
}

Polynomial Polynomial::derivative() const {
  const int n = degree();
  if (n <= 0) return Polynomial(std::vector<double>{0.0});
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)] * (n - i);
  }
  return Polynomial(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<double> out(n, 0.0);
  const std::size_t oa = n - a.coeffs_.size();
  const std::size_t ob = n - b.coeffs_.size();
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[oa + i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[ob + i] += b.coeffs_[i];
  return Polynomial(std::move(out));
}

Polynomial operator*(double k, const Polynomial& p) {
  std::vector<double> out = p.coeffs_;
  for (double& c : out) c *= k;
  return Polynomial(std::move(out));
}

double root_residual_bound(const Polynomial& p) {
  return 1e-8 * (1.0 + p.inf_norm());
}

namespace {

constexpr int kAberthMaxIters = 200;
constexpr double kAberthTol = 1e-12;

// One Ehrlich-Aberth pass over all current root estimates, in place.
// Returns the largest relative correction applied.
double aberth_sweep(const Polynomial& p, const Polynomial& dp,
                    std::vector<std::complex<double>>& z) {
  using cplx = std::complex<double>;
  double worst = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const cplx pk = p(z[k]);
    cplx dpk = dp(z[k]);
    if (pk == cplx{0.0, 0.0}) continue;
    if (dpk == cplx{0.0, 0.0}) dpk = cplx{1e-30, 0.0};
    const cplx w = pk / dpk;
    cplx repel{0.0, 0.0};
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == k) continue;
      cplx diff = z[k] - z[j];
      if (diff == cplx{0.0, 0.0}) diff = cplx{1e-30, 0.0};
      repel += 1.0 / diff;
    }
    const cplx denom = 1.0 - w * repel;
    const cplx step = (std::abs(denom) > 1e-30) ? w / denom : w;
    z[k] -= step;
    worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[k])));
  }
  return worst;
}

// Snap near-real roots to the real axis and average conjugate partners so
// real-coefficient inputs come back exactly conjugate-closed.
void symmetrize_conjugates(std::vector<std::complex<double>>& roots) {
  using cplx = std::complex<double>;
  std::vector<bool> done(roots.size(), false);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (done[k]) continue;
    const double scale = 1.0 + std::abs(roots[k]);
    if (std::abs(roots[k].imag()) <= 1e-9 * scale) {
      roots[k] = cplx{roots[k].real(), 0.0};
      done[k] = true;
      continue;
    }
    // Closest conjugate partner among the remaining roots.
    std::size_t best = k;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = k + 1; j < roots.size(); ++j) {
      if (done[j]) continue;
      const double d = std::abs(roots[j] - std::conj(roots[k]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best != k && best_d <= 1e-6 * scale) {
      const double re = 0.5 * (roots[k].real() + roots[best].real());
      const double im = 0.5 * (std::abs(roots[k].imag()) + std::abs(roots[best].imag()));
      const double sign = roots[k].imag() > 0 ? 1.0 : -1.0;
      roots[k] = cplx{re, sign * im};
      roots[best] = cplx{re, -sign * im};
      done[k] = done[best] = true;
    } else {
      done[k] = true;  // leave unpaired (multiple roots off-axis)
    }
  }
}

}  // namespace

std::vector<std::complex<double>> find_roots(const Polynomial& p) {
  using cplx = std::complex<double>;
  if (p.degree() < 1 || p.is_zero()) {
    throw std::invalid_argument("find_roots requires degree >= 1");
  }

  // Deflate exact zero roots: trailing zero coefficients.
  std::vector<double> c = p.coeffs();
  std::vector<cplx> roots;
  while (c.size() > 1 && c.back() == 0.0) {
    roots.emplace_back(0.0, 0.0);
    c.pop_back();
  }

  const int n = static_cast<int>(c.size()) - 1;
  if (n >= 1) {
    // Monic form for the iteration.
    std::vector<double> mo(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) mo[i] = c[i] / c[0];
    const Polynomial monic(mo);
    const Polynomial dmonic = monic.derivative();

    if (n == 1) {
      roots.emplace_back(-mo[1], 0.0);
    } else {
      double radius = 0.0;
      for (std::size_t i = 1; i < mo.size(); ++i) radius = std::max(radius, std::abs(mo[i]));
      radius += 1.0;

      std::vector<cplx> z(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / n + 0.25;
        z[static_cast<std::size_t>(k)] = radius * cplx{std::cos(ang), std::sin(ang)};
      }

      bool converged = false;
      for (int it = 0; it < kAberthMaxIters; ++it) {
        if (aberth_sweep(monic, dmonic, z) < kAberthTol) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        // Accept anyway if the residuals are already below the bound.
        const double bound = root_residual_bound(p);
        std::ostringstream msg;
        msg << "root finding did not converge; residuals:";
        bool ok = true;
        for (const cplx& r : z) {
          const double res = std::abs(p(r));
          msg << ' ' << res;
          ok = ok && res < bound;
        }
        if (!ok) throw numerical_error(msg.str());
      }
      symmetrize_conjugates(z);
      roots.insert(roots.end(), z.begin(), z.end());
    }
  }

  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  const double bound = root_residual_bound(p);
  for (const cplx& r : roots) {
    const double res = std::abs(p(r));
    if (!(res < bound)) {
      std::ostringstream msg;
      msg << "root residual " << res << " exceeds bound " << bound << " at root ("
          << r.real() << ", " << r.imag() << ")";
      throw numerical_error(msg.str());
    }
  }
  return roots;
}

}  // namespace pendctl
