#pragma once

#include <complex>
#include <vector>

namespace pendctl {

/// Real polynomial with coefficients stored highest degree first.
/// The representation is kept normalized: the leading coefficient is
/// nonzero unless the polynomial is identically zero (stored as {0}).
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

  double leading() const { return coeffs_.front(); }
  double inf_norm() const;

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;

  Polynomial derivative() const;

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& p);
  bool operator==(const Polynomial&) const = default;

 private:
  std::vector<double> coeffs_;
};

/// All degree() roots of p, with multiplicity, via Aberth-Ehrlich
/// simultaneous iteration. Exact zero roots are deflated before the
/// iteration by trailing-coefficient inspection. Complex roots of the
/// real polynomial come back in conjugate pairs, sorted by (re, im).
///
/// Throws std::invalid_argument for degree < 1 and numerical_error if
/// the iteration cap is reached without meeting the residual bound.
std::vector<std::complex<double>> find_roots(const Polynomial& p);

/// Residual bound the returned roots are guaranteed to satisfy:
/// |p(r)| < root_residual_bound(p).
double root_residual_bound(const Polynomial& p);

}  // namespace pendctl
