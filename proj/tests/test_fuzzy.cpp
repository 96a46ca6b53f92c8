#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pendctl/errors.hpp"
#include "pendctl/fuzzy.hpp"
#include "test_util.hpp"

using namespace pendctl;
using testutil::close;

namespace {

/// Deliberately naive Mamdani evaluation, written independently of the
/// library: rule firing by min over antecedents, min implication, max
/// aggregation, centroid over the same 1001-point grid.
double naive_single_output(const FuzzyInferenceSystem& fis, const std::vector<double>& in) {
  REQUIRE(fis.outputs().size() == 1);
  const LinguisticVariable& out = fis.outputs()[0];

  std::vector<double> clipped = in;
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    clipped[i] = std::min(std::max(clipped[i], fis.inputs()[i].lo), fis.inputs()[i].hi);
  }

  double num = 0.0, den = 0.0;
  const int n = FuzzyInferenceSystem::kCentroidSamples;
  for (int k = 0; k < n; ++k) {
    const double y = out.lo + (out.hi - out.lo) * k / (n - 1);
    double agg = 0.0;
    for (const FuzzyRule& r : fis.rules()) {
      double fire = 1.0;
      for (const auto& [vi, ti] : r.antecedent) {
        fire = std::min(fire, membership(fis.inputs()[vi].terms[ti].mf, clipped[vi]));
      }
      const double implied = std::min(fire, membership(out.terms[r.output_term].mf, y));
      agg = std::max(agg, implied);
    }
    num += y * agg;
    den += agg;
  }
  REQUIRE(den > 0.0);
  return num / den;
}

}  // namespace

TEST_CASE("triangular membership hits its anchors") {
  const auto tri = MembershipFunction::triangular(-1.0, 0.0, 1.0);
  CHECK(membership(tri, 0.0) == 1.0);
  CHECK(membership(tri, -1.0) == 0.0);
  CHECK(membership(tri, 1.0) == 0.0);
  CHECK(membership(tri, 0.5) == doctest::Approx(0.5));
  CHECK(membership(tri, -0.25) == doctest::Approx(0.75));
  CHECK(membership(tri, 2.0) == 0.0);
  CHECK(membership(tri, -7.0) == 0.0);
}

TEST_CASE("trapezoidal membership has a flat core") {
  const auto trap = MembershipFunction::trapezoidal(0.0, 1.0, 2.0, 4.0);
  CHECK(membership(trap, 1.0) == 1.0);
  CHECK(membership(trap, 1.7) == 1.0);
  CHECK(membership(trap, 2.0) == 1.0);
  CHECK(membership(trap, 0.5) == doctest::Approx(0.5));
  CHECK(membership(trap, 3.0) == doctest::Approx(0.5));
  CHECK(membership(trap, 4.0) == 0.0);
}

TEST_CASE("breakpoints must be non-decreasing") {
  CHECK_THROWS_AS(MembershipFunction::triangular(0.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MembershipFunction::trapezoidal(0.0, 2.0, 1.0, 3.0), std::invalid_argument);
}

TEST_CASE("membership stays in [0,1] across the support") {
  const auto tri = MembershipFunction::triangular(-0.4, 0.1, 0.9);
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    const double m = membership(tri, x);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
  }
}

TEST_CASE("single fully-fired symmetric consequent defuzzifies to its peak") {
  LinguisticVariable in;
  in.name = "x";
  in.lo = -1.0;
  in.hi = 1.0;
  in.terms.push_back({"any", MembershipFunction::trapezoidal(-2.0, -1.0, 1.0, 2.0)});

  LinguisticVariable out;
  out.name = "y";
  out.lo = 0.0;
  out.hi = 10.0;
  // Feet sit outside the universe so the variable is covered end to end;
  // the clipped shape is still symmetric about 5.
  out.terms.push_back({"mid", MembershipFunction::triangular(-2.0, 5.0, 12.0)});

  const FuzzyInferenceSystem fis({in}, {out}, {FuzzyRule{{{0, 0}}, 0, 0}});
  const auto result = fis.evaluate({0.3});
  REQUIRE(result.size() == 1);
  CHECK(close(result[0], 5.0, 1e-9));  // isoceles triangle centroid = peak abscissa
}

TEST_CASE("direct controller structure") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  CHECK(fis.rules().size() == 25);
  REQUIRE(fis.inputs().size() == 2);
  REQUIRE(fis.outputs().size() == 1);
  CHECK(fis.inputs()[0].terms.size() == 5);
  CHECK(fis.inputs()[1].terms.size() == 5);
  CHECK(fis.outputs()[0].terms.size() == 5);
  CHECK(fis.inputs()[0].name == "theta");
  CHECK(fis.outputs()[0].name == "force");
}

TEST_CASE("direct controller is centered and restoring") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  CHECK(close(fis.evaluate({0.0, 0.0})[0], 0.0, 1e-9));

  // A positive tilt demands a negative (restoring) force.
  const double f = fis.evaluate({0.1, 0.0})[0];
  CHECK(f < -1.0);
  const double g = fis.evaluate({-0.1, 0.0})[0];
  CHECK(g > 1.0);
  CHECK(close(f, -g, 1e-6 * 20.0));
}

TEST_CASE("direct controller matches a naive reimplementation") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  const std::vector<std::vector<double>> probes = {
      {0.1, 0.0},  {-0.1, 0.0}, {0.0, 0.4},   {0.05, -0.2},
      {0.3, 1.0},  {-0.3, -1.0}, {0.22, 0.13}, {-0.07, 0.91},
  };
  for (const auto& p : probes) {
    CHECK(close(fis.evaluate(p)[0], naive_single_output(fis, p), 1e-9));
  }
}

TEST_CASE("direct control surface is odd on a 101x101 grid") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  const SurfaceTable table = export_surface(fis, 101);
  REQUIRE(table.rows.size() == 101 * 101);
  REQUIRE(table.columns == std::vector<std::string>{"theta", "theta_dot", "force"});

  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const auto& row = table.rows[static_cast<std::size_t>(i * 101 + j)];
      const auto& mirror = table.rows[static_cast<std::size_t>((100 - i) * 101 + (100 - j))];
      worst = std::max(worst, std::abs(row[2] + mirror[2]));
    }
  }
  CHECK(worst < 1e-6 * 20.0);
}

TEST_CASE("surface rows reproduce pointwise evaluation") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  const SurfaceTable table = export_surface(fis, 5);
  REQUIRE(table.rows.size() == 25);
  for (const auto& row : table.rows) {
    CHECK(row.size() == 3);
    CHECK(row[2] == fis.evaluate({row[0], row[1]})[0]);
  }
}

TEST_CASE("2x2 surface has 4 row-major rows") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  const SurfaceTable table = export_surface(fis, 2);
  REQUIRE(table.rows.size() == 4);
  // First input outermost, second advances fastest.
  CHECK(table.rows[0][0] == doctest::Approx(-0.3));
  CHECK(table.rows[0][1] == doctest::Approx(-1.0));
  CHECK(table.rows[1][0] == doctest::Approx(-0.3));
  CHECK(table.rows[1][1] == doctest::Approx(1.0));
  CHECK(table.rows[2][0] == doctest::Approx(0.3));
  CHECK(table.rows[3][1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(export_surface(fis, 1), std::invalid_argument);
}

TEST_CASE("evaluate clips inputs to the universe") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  CHECK(fis.evaluate({5.0, 0.0})[0] == fis.evaluate({0.3, 0.0})[0]);
  CHECK(fis.evaluate({-5.0, -99.0})[0] == fis.evaluate({-0.3, -1.0})[0]);
}

TEST_CASE("evaluate validates its input vector") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  CHECK_THROWS_AS(fis.evaluate({0.1}), std::invalid_argument);
  CHECK_THROWS_AS(fis.evaluate({0.1, std::nan("")}), std::invalid_argument);
}

TEST_CASE("gain scheduler keeps outputs inside the declared ranges") {
  const GainSchedulerConfig cfg;
  const FuzzyInferenceSystem fis = build_gain_scheduler(cfg);
  REQUIRE(fis.outputs().size() == 2);
  for (int i = 0; i <= 100; ++i) {
    const double e = -cfg.error_max + 2.0 * cfg.error_max * i / 100.0;
    const auto out = fis.evaluate({e});
    CHECK(out[0] >= cfg.kp_min);
    CHECK(out[0] <= cfg.kp_max);
    CHECK(out[1] >= cfg.kd_min);
    CHECK(out[1] <= cfg.kd_max);
  }
}

TEST_CASE("gain scheduler leans low at zero error") {
  const GainSchedulerConfig cfg;
  const FuzzyInferenceSystem fis = build_gain_scheduler(cfg);
  const auto out = fis.evaluate({0.0});
  // Lone low-tier consequent: a right triangle with peak at the lower
  // bound, centroid one third into its base.
  const double kp_expected = cfg.kp_min + (cfg.kp_max - cfg.kp_min) / 4.0 / 3.0;
  const double kd_expected = cfg.kd_min + (cfg.kd_max - cfg.kd_min) / 4.0 / 3.0;
  CHECK(close(out[0], kp_expected, 0.1));
  CHECK(close(out[1], kd_expected, 0.1));
  CHECK(out[0] < (cfg.kp_min + cfg.kp_max) / 2.0);
  CHECK(out[1] < (cfg.kd_min + cfg.kd_max) / 2.0);
}

TEST_CASE("scheduled KP rises monotonically with |error| and is even in the sign") {
  const GainSchedulerConfig cfg;
  const FuzzyInferenceSystem fis = build_gain_scheduler(cfg);
  double prev = -1.0;
  for (int i = 0; i <= 30; ++i) {
    const double e = cfg.error_max * i / 30.0;
    const double kp = fis.evaluate({e})[0];
    CHECK(kp >= prev - 1e-4);
    prev = kp;
    CHECK(close(fis.evaluate({-e})[0], kp, 1e-9));
  }
  CHECK(fis.evaluate({cfg.error_max})[0] > fis.evaluate({0.0})[0] + 10.0);
}

TEST_CASE("structural validation catches broken systems") {
  LinguisticVariable x;
  x.name = "x";
  x.lo = 1.0;
  x.hi = -1.0;
  x.terms.push_back({"t", MembershipFunction::triangular(-1, 0, 1)});
  CHECK_THROWS_AS(x.validate(), std::invalid_argument);

  LinguisticVariable gap;
  gap.name = "gap";
  gap.lo = -1.0;
  gap.hi = 1.0;
  gap.terms.push_back({"left", MembershipFunction::triangular(-1.5, -1.0, -0.5)});
  CHECK_THROWS_AS(gap.validate(), std::invalid_argument);  // (-0.5, 1] uncovered

  CHECK_THROWS_AS(LinguisticVariable{}.validate(), std::invalid_argument);  // no terms
}

TEST_CASE("term lookup by name") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  CHECK(fis.inputs()[0].term_index("ZE") == 2);
  CHECK(fis.inputs()[0].term_index("PB") == 4);
  CHECK_THROWS_AS(fis.inputs()[0].term_index("nope"), std::invalid_argument);
}

TEST_CASE("an input point no rule covers raises a descriptive error") {
  // The term layout hides a micro-gap at (0.001, 0.019): narrower than the
  // validation grids, but real. Inference at 0.01 must fail loudly.
  LinguisticVariable x;
  x.name = "x";
  x.lo = -1.0;
  x.hi = 1.0;
  x.terms.push_back({"low", MembershipFunction::trapezoidal(-1.1, -1.0, -0.5, 0.001)});
  x.terms.push_back({"high", MembershipFunction::trapezoidal(0.019, 0.5, 1.0, 1.1)});

  LinguisticVariable y;
  y.name = "y";
  y.lo = 0.0;
  y.hi = 1.0;
  y.terms.push_back({"all", MembershipFunction::trapezoidal(-0.1, 0.0, 1.0, 1.1)});

  const FuzzyInferenceSystem fis({x}, {y},
                                 {FuzzyRule{{{0, 0}}, 0, 0}, FuzzyRule{{{0, 1}}, 0, 0}});
  try {
    fis.evaluate({0.01});
    FAIL("expected numerical_error");
  } catch (const numerical_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("no rule fired") != std::string::npos);
    CHECK(msg.find("0.01") != std::string::npos);
    CHECK(msg.find("y") != std::string::npos);
  }
}

TEST_CASE("evaluation is deterministic") {
  const FuzzyInferenceSystem fis = build_direct_controller(DirectControllerConfig{});
  const auto a = fis.evaluate({0.17, -0.42});
  const auto b = fis.evaluate({0.17, -0.42});
  CHECK(a[0] == b[0]);
}
