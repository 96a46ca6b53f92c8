#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace pendctl {

/// Knobs for the simplex search. The defaults are the standard
/// reflection/expansion/contraction/shrink coefficients.
struct NelderMeadOptions {
  int max_iters = 2000;
  long max_evals = 0;        // 0 = no evaluation cap
  double simplex_tol = 1e-9; // stop when the simplex diameter shrinks below this
  double target = 1e-10;     // stop when the best value drops below this
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
};

/// Derivative-free bounded minimization. Every candidate is clipped into
/// [lo, hi] per coordinate *before* evaluation, so `f` never sees an
/// out-of-bounds point. Deterministic: no internal randomness.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const std::vector<std::pair<double, double>>& bounds,
                             const NelderMeadOptions& opts = {});

}  // namespace pendctl
