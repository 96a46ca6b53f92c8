#include "pendctl/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pendctl/errors.hpp"

namespace pendctl {

MembershipFunction MembershipFunction::triangular(double a, double b, double c) {
  if (!(a <= b && b <= c)) {
    throw std::invalid_argument("triangular breakpoints must be non-decreasing");
  }
  return MembershipFunction{Shape::triangular, {a, b, c, c}};
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c, double d) {
  if (!(a <= b && b <= c && c <= d)) {
    throw std::invalid_argument("trapezoidal breakpoints must be non-decreasing");
  }
  return MembershipFunction{Shape::trapezoidal, {a, b, c, d}};
}

double membership(const MembershipFunction& mf, double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("membership input must be finite");
  const double a = mf.points[0], b = mf.points[1];
  const double c = mf.shape == MembershipFunction::Shape::triangular ? mf.points[1]
                                                                     : mf.points[2];
  const double d = mf.shape == MembershipFunction::Shape::triangular ? mf.points[2]
                                                                     : mf.points[3];
  if (x < a || x > d) return 0.0;
  if (x >= b && x <= c) return 1.0;
  if (x < b) return b == a ? 1.0 : (x - a) / (b - a);
  return d == c ? 1.0 : (d - x) / (d - c);
}

namespace {

std::pair<double, double> support(const MembershipFunction& mf) {
  const double last = mf.shape == MembershipFunction::Shape::triangular ? mf.points[2]
                                                                        : mf.points[3];
  return {mf.points[0], last};
}

}  // namespace

void LinguisticVariable::validate() const {
  if (!(lo < hi)) throw std::invalid_argument("universe must satisfy lo < hi: " + name);
  if (terms.empty()) throw std::invalid_argument("variable has no terms: " + name);
  for (const auto& t : terms) {
    const auto [s0, s1] = support(t.mf);
    if (s1 < lo || s0 > hi) {
      throw std::invalid_argument("term support misses the universe: " + name + "." + t.name);
    }
  }
  // Every universe point must carry nonzero membership in at least one term.
  constexpr int kGrid = 101;
  for (int i = 0; i < kGrid; ++i) {
    const double x = lo + (hi - lo) * i / (kGrid - 1);
    bool covered = false;
    for (const auto& t : terms) {
      if (membership(t.mf, x) > 0.0) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      std::ostringstream msg;
      msg << "universe of " << name << " uncovered at " << x;
      throw std::invalid_argument(msg.str());
    }
  }
}

std::size_t LinguisticVariable::term_index(const std::string& term_name) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].name == term_name) return i;
  }
  throw std::invalid_argument("unknown term " + term_name + " for variable " + name);
}

FuzzyInferenceSystem::FuzzyInferenceSystem(std::vector<LinguisticVariable> inputs,
                                           std::vector<LinguisticVariable> outputs,
                                           std::vector<FuzzyRule> rules)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), rules_(std::move(rules)) {
  validate();
}

void FuzzyInferenceSystem::validate() const {
  if (inputs_.empty() || outputs_.empty() || rules_.empty()) {
    throw std::invalid_argument("fuzzy system needs inputs, outputs and rules");
  }
  for (const auto& v : inputs_) v.validate();
  for (const auto& v : outputs_) v.validate();
  for (const auto& r : rules_) {
    if (r.antecedent.empty()) throw std::invalid_argument("rule with empty antecedent");
    for (const auto& [vi, ti] : r.antecedent) {
      if (vi >= inputs_.size() || ti >= inputs_[vi].terms.size()) {
        throw std::invalid_argument("rule references unknown input term");
      }
    }
    if (r.output_var >= outputs_.size() ||
        r.output_term >= outputs_[r.output_var].terms.size()) {
      throw std::invalid_argument("rule references unknown output term");
    }
  }
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    const bool any = std::any_of(rules_.begin(), rules_.end(),
                                 [o](const FuzzyRule& r) { return r.output_var == o; });
    if (!any) {
      throw std::invalid_argument("no rule targets output " + outputs_[o].name);
    }
  }

  // Completeness: on a coarse grid of the input space, some rule must fire
  // for every output variable.
  constexpr int kGrid = 21;
  std::vector<std::size_t> idx(inputs_.size(), 0);
  std::vector<double> point(inputs_.size());
  while (true) {
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      point[i] = inputs_[i].lo + (inputs_[i].hi - inputs_[i].lo) * idx[i] / (kGrid - 1);
    }
    evaluate(point);  // throws if some output has zero aggregate here

    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < kGrid) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
}

std::vector<double> FuzzyInferenceSystem::evaluate(const std::vector<double>& in) const {
  if (in.size() != inputs_.size()) {
    throw std::invalid_argument("expected one value per input variable");
  }
  std::vector<double> clipped(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!std::isfinite(in[i])) throw std::invalid_argument("inputs must be finite");
    clipped[i] = std::clamp(in[i], inputs_[i].lo, inputs_[i].hi);
  }

  std::vector<double> firing(rules_.size());
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    double f = 1.0;
    for (const auto& [vi, ti] : rules_[r].antecedent) {
      f = std::min(f, membership(inputs_[vi].terms[ti].mf, clipped[vi]));
    }
    firing[r] = f;
  }

  std::vector<double> out(outputs_.size());
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    const LinguisticVariable& var = outputs_[o];
    const double step = (var.hi - var.lo) / (kCentroidSamples - 1);
    double area = 0.0, moment = 0.0;
    for (int i = 0; i < kCentroidSamples; ++i) {
      const double y = var.lo + i * step;
      double agg = 0.0;
      for (std::size_t r = 0; r < rules_.size(); ++r) {
        if (rules_[r].output_var != o || firing[r] == 0.0) continue;
        agg = std::max(agg,
                       std::min(firing[r], membership(var.terms[rules_[r].output_term].mf, y)));
      }
      area += agg;
      moment += agg * y;
    }
    if (area == 0.0) {
      std::ostringstream msg;
      msg << "no rule fired for output " << var.name << " at input (";
      for (std::size_t i = 0; i < clipped.size(); ++i) {
        msg << (i ? ", " : "") << clipped[i];
      }
      msg << ")";
      throw numerical_error(msg.str());
    }
    out[o] = moment / area;
  }
  return out;
}

namespace {

// Five uniformly spaced triangles with 50% overlap. The end terms keep
// their nominal half-width so their peaks sit exactly on the bounds; the
// part outside the universe is clipped on input and truncated (symmetric
// on both ends) in the centroid grid.
LinguisticVariable five_term_variable(const std::string& name, double lo, double hi,
                                      const std::array<const char*, 5>& names) {
  LinguisticVariable v;
  v.name = name;
  v.lo = lo;
  v.hi = hi;
  const double h = (hi - lo) / 4.0;
  for (int k = 0; k < 5; ++k) {
    const double center = lo + k * h;
    v.terms.push_back({names[static_cast<std::size_t>(k)],
                       MembershipFunction::triangular(center - h, center, center + h)});
  }
  return v;
}

constexpr std::array<const char*, 5> kSignedTerms = {"NB", "NS", "ZE", "PS", "PB"};
constexpr std::array<const char*, 5> kLevelTerms = {"VL", "LO", "MD", "HI", "VH"};

}  // namespace

FuzzyInferenceSystem build_direct_controller(const DirectControllerConfig& cfg) {
  if (!(cfg.theta_max > 0.0 && cfg.theta_dot_max > 0.0 && cfg.force_max > 0.0)) {
    throw std::invalid_argument("direct controller universes must be positive");
  }
  std::vector<LinguisticVariable> inputs{
      five_term_variable("theta", -cfg.theta_max, cfg.theta_max, kSignedTerms),
      five_term_variable("theta_dot", -cfg.theta_dot_max, cfg.theta_dot_max, kSignedTerms)};
  std::vector<LinguisticVariable> outputs{
      five_term_variable("force", -cfg.force_max, cfg.force_max, kSignedTerms)};

  // Skew-symmetric table: the further the pendulum leans (and moves) in one
  // direction, the harder the force pushes the other way.
  std::vector<FuzzyRule> rules;
  rules.reserve(25);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const int k = std::clamp(6 - static_cast<int>(i + j), 0, 4);
      rules.push_back(FuzzyRule{{{0, i}, {1, j}}, 0, static_cast<std::size_t>(k)});
    }
  }
  return FuzzyInferenceSystem(std::move(inputs), std::move(outputs), std::move(rules));
}

FuzzyInferenceSystem build_gain_scheduler(const GainSchedulerConfig& cfg) {
  if (!(cfg.error_max > 0.0) || !(cfg.kp_min < cfg.kp_max) || !(cfg.kd_min < cfg.kd_max) ||
      cfg.kp_min < 0.0 || cfg.kd_min < 0.0) {
    throw std::invalid_argument("invalid gain scheduler ranges");
  }
  std::vector<LinguisticVariable> inputs{
      five_term_variable("error", -cfg.error_max, cfg.error_max, kSignedTerms)};
  std::vector<LinguisticVariable> outputs{
      five_term_variable("kp", cfg.kp_min, cfg.kp_max, kLevelTerms),
      five_term_variable("kd", cfg.kd_min, cfg.kd_max, kLevelTerms)};

  // Symmetric in the error sign: gains rise with |error|.
  const std::array<std::size_t, 5> level = {4, 2, 0, 2, 4};  // NB NS ZE PS PB
  std::vector<FuzzyRule> rules;
  for (std::size_t e = 0; e < 5; ++e) {
    rules.push_back(FuzzyRule{{{0, e}}, 0, level[e]});
    rules.push_back(FuzzyRule{{{0, e}}, 1, level[e]});
  }
  return FuzzyInferenceSystem(std::move(inputs), std::move(outputs), std::move(rules));
}

SurfaceTable export_surface(const FuzzyInferenceSystem& fis, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("surface grid needs >= 2 points per input");

  SurfaceTable table;
  for (const auto& v : fis.inputs()) table.columns.push_back(v.name);
  for (const auto& v : fis.outputs()) table.columns.push_back(v.name);

  const std::size_t n_in = fis.inputs().size();
  std::vector<std::size_t> idx(n_in, 0);
  std::vector<double> point(n_in);
  while (true) {
    for (std::size_t i = 0; i < n_in; ++i) {
      const auto& v = fis.inputs()[i];
      point[i] = v.lo + (v.hi - v.lo) * idx[i] / (grid_points - 1);
    }
    std::vector<double> out;
    try {
      out = fis.evaluate(point);
    } catch (const numerical_error& e) {
      std::ostringstream msg;
      msg << "surface export failed at grid point (";
      for (std::size_t i = 0; i < n_in; ++i) msg << (i ? ", " : "") << point[i];
      msg << "): " << e.what();
      throw numerical_error(msg.str());
    }
    std::vector<double> row = point;
    row.insert(row.end(), out.begin(), out.end());
    table.rows.push_back(std::move(row));

    // Row-major: last input advances fastest.
    std::size_t i = n_in;
    while (i > 0) {
      --i;
      if (++idx[i] < static_cast<std::size_t>(grid_points)) break;
      idx[i] = 0;
      if (i == 0) return table;
    }
  }
}

}  // namespace pendctl
