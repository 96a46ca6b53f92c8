#include "pendctl/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pendctl {

namespace {

void clip_into(std::vector<double>& x, const std::vector<std::pair<double, double>>& bounds) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], bounds[i].first, bounds[i].second);
  }
}

double simplex_diameter(const std::vector<std::vector<double>>& verts) {
  double d = 0.0;
  for (std::size_t a = 1; a < verts.size(); ++a) {
    for (std::size_t i = 0; i < verts[a].size(); ++i) {
      d = std::max(d, std::abs(verts[a][i] - verts[0][i]));
    }
  }
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const std::vector<std::pair<double, double>>& bounds,
                             const NelderMeadOptions& opts) {
  const std::size_t n = start.size();
  if (n == 0) throw std::invalid_argument("nelder_mead needs at least one dimension");
  if (bounds.size() != n) throw std::invalid_argument("bounds/start dimension mismatch");
  for (const auto& [lo, hi] : bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw std::invalid_argument("nelder_mead bounds must be finite with lo < hi");
    }
  }

  long evals = 0;
  const auto eval = [&](std::vector<double> x) {
    clip_into(x, bounds);
    // Hard evaluation cap: once the budget is spent, report +inf instead of
    // calling f. Infinite values are never accepted as improvements, so the
    // search winds down without overrunning the cap.
    if (opts.max_evals > 0 && evals >= opts.max_evals) {
      return std::make_pair(std::numeric_limits<double>::infinity(), std::move(x));
    }
    ++evals;
    return std::make_pair(f(x), std::move(x));
  };

  // Initial simplex: the start plus one vertex nudged 5% of the box width
  // along each axis (nudged inward when the start sits on the upper bound).
  std::vector<std::vector<double>> verts;
  std::vector<double> vals;
  {
    auto [v0, x0] = eval(start);
    verts.push_back(std::move(x0));
    vals.push_back(v0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v = verts[0];
    const double step = 0.05 * (bounds[i].second - bounds[i].first);
    v[i] += (v[i] + step <= bounds[i].second) ? step : -step;
    auto [fv, xv] = eval(std::move(v));
    verts.push_back(std::move(xv));
    vals.push_back(fv);
  }

  const auto order = [&] {
    std::vector<std::size_t> idx(verts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> sv;
    std::vector<double> sf;
    for (std::size_t i : idx) {
      sv.push_back(verts[i]);
      sf.push_back(vals[i]);
    }
    verts = std::move(sv);
    vals = std::move(sf);
  };
  order();

  NelderMeadResult result;
  int iter = 0;
  const auto budget_left = [&] { return opts.max_evals == 0 || evals < opts.max_evals; };
  for (; iter < opts.max_iters && budget_left(); ++iter) {
    if (vals[0] < opts.target || simplex_diameter(verts) < opts.simplex_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t a = 0; a + 1 < verts.size(); ++a) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += verts[a][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    const std::vector<double>& worst = verts.back();
    std::vector<double> refl(n);
    for (std::size_t i = 0; i < n; ++i) {
      refl[i] = centroid[i] + opts.reflection * (centroid[i] - worst[i]);
    }
    auto [f_refl, x_refl] = eval(std::move(refl));

    if (f_refl < vals[0]) {
      std::vector<double> exp_pt(n);
      for (std::size_t i = 0; i < n; ++i) {
        exp_pt[i] = centroid[i] + opts.expansion * (x_refl[i] - centroid[i]);
      }
      auto [f_exp, x_exp] = eval(std::move(exp_pt));
      if (f_exp < f_refl) {
        verts.back() = std::move(x_exp);
        vals.back() = f_exp;
      } else {
        verts.back() = std::move(x_refl);
        vals.back() = f_refl;
      }
    } else if (f_refl < vals[vals.size() - 2]) {
      verts.back() = std::move(x_refl);
      vals.back() = f_refl;
    } else {
      // Contract toward the better of (worst, reflected).
      const bool outside = f_refl < vals.back();
      const std::vector<double>& toward = outside ? x_refl : worst;
      std::vector<double> contr(n);
      for (std::size_t i = 0; i < n; ++i) {
        contr[i] = centroid[i] + opts.contraction * (toward[i] - centroid[i]);
      }
      auto [f_contr, x_contr] = eval(std::move(contr));
      if (f_contr < std::min(f_refl, vals.back())) {
        verts.back() = std::move(x_contr);
        vals.back() = f_contr;
      } else {
        for (std::size_t a = 1; a < verts.size() && budget_left(); ++a) {
          std::vector<double> shr(n);
          for (std::size_t i = 0; i < n; ++i) {
            shr[i] = verts[0][i] + opts.shrink * (verts[a][i] - verts[0][i]);
          }
          auto [f_shr, x_shr] = eval(std::move(shr));
          verts[a] = std::move(x_shr);
          vals[a] = f_shr;
        }
      }
    }
    order();
  }

  if (!result.converged &&
      (vals[0] < opts.target || simplex_diameter(verts) < opts.simplex_tol)) {
    result.converged = true;
  }
  result.x = verts[0];
  result.value = vals[0];
  result.iterations = iter;
  result.evaluations = evals;
  return result;
}

}  // namespace pendctl
