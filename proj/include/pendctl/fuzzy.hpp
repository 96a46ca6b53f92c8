#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace pendctl {

/// Piecewise-linear membership function. Evaluates to exactly 1 on the
/// core and exactly 0 outside the support.
struct MembershipFunction {
  enum class Shape { triangular, trapezoidal };
  Shape shape = Shape::triangular;
  std::array<double, 4> points{};  // a <= b <= c (<= d); triangular ignores d

  static MembershipFunction triangular(double a, double b, double c);
  static MembershipFunction trapezoidal(double a, double b, double c, double d);
};

double membership(const MembershipFunction& mf, double x);

struct LinguisticTerm {
  std::string name;
  MembershipFunction mf;
};

struct LinguisticVariable {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<LinguisticTerm> terms;

  /// Throws std::invalid_argument if lo >= hi, a term's support misses the
  /// universe, or the term set leaves part of the universe uncovered.
  void validate() const;
  std::size_t term_index(const std::string& term_name) const;
};

/// IF in[0] is A AND in[1] is B ... THEN out[var] is T. Antecedent entries
/// are (input index, term index); inputs not referenced do not constrain
/// the rule.
struct FuzzyRule {
  std::vector<std::pair<std::size_t, std::size_t>> antecedent;
  std::size_t output_var = 0;
  std::size_t output_term = 0;
};

/// Mamdani system: min AND, min implication, max aggregation, centroid
/// defuzzification over a uniform discretization of each output universe.
class FuzzyInferenceSystem {
 public:
  static constexpr int kCentroidSamples = 1001;

  FuzzyInferenceSystem() = default;
  FuzzyInferenceSystem(std::vector<LinguisticVariable> inputs,
                       std::vector<LinguisticVariable> outputs,
                       std::vector<FuzzyRule> rules);

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const std::vector<LinguisticVariable>& outputs() const { return outputs_; }
  const std::vector<FuzzyRule>& rules() const { return rules_; }

  /// Crisp outputs for the given crisp inputs (one per declared input, in
  /// order). Inputs are clipped to their universes before inference.
  /// Throws numerical_error naming the input point if no rule fires for
  /// some output.
  std::vector<double> evaluate(const std::vector<double>& in) const;

  /// Structural validation plus rule-coverage check over an input grid.
  void validate() const;

 private:
  std::vector<LinguisticVariable> inputs_;
  std::vector<LinguisticVariable> outputs_;
  std::vector<FuzzyRule> rules_;
};

/// Direct fuzzy controller of the simulated loop: inputs theta (rad) and
/// theta_dot (rad/s), output a restoring force (N). Five uniformly spaced
/// triangular terms per variable and the 25-rule skew-symmetric table, so
/// the control surface is odd.
struct DirectControllerConfig {
  double theta_max = 0.3;      // rad
  double theta_dot_max = 1.0;  // rad/s
  double force_max = 20.0;     // N
};
FuzzyInferenceSystem build_direct_controller(const DirectControllerConfig& cfg);

/// Gain scheduler of the self-tuning PID: one input (signed angle error),
/// two outputs KP and KD. Small error maps to low gains, large error to
/// high gains; outputs always stay inside the declared ranges.
struct GainSchedulerConfig {
  double error_max = 0.3;  // rad
  double kp_min = 1.0;
  double kp_max = 100.0;
  double kd_min = 0.1;
  double kd_max = 20.0;
};
FuzzyInferenceSystem build_gain_scheduler(const GainSchedulerConfig& cfg);

/// Control surface sampled on a uniform grid (grid_points per input,
/// row-major with the first input outermost). Each row holds the input
/// coordinates followed by the crisp outputs.
struct SurfaceTable {
  std::vector<std::string> columns;  // input names then output names
  std::vector<std::vector<double>> rows;
};
SurfaceTable export_surface(const FuzzyInferenceSystem& fis, int grid_points);

}  // namespace pendctl
