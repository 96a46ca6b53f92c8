#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pendctl/analysis.hpp"
#include "pendctl/dynamics.hpp"
#include "pendctl/fuzzy.hpp"
#include "pendctl/identify.hpp"
#include "pendctl/pid.hpp"
#include "pendctl/simulate.hpp"

namespace pendctl {

/// Shortest decimal string that round-trips the exact double value.
std::string fmt_double(double v);

// --- JSON ---------------------------------------------------------------
// All from_json readers reject unknown keys so config typos fail loudly.

nlohmann::json to_json(const PhysicalParams& p);
PhysicalParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PidGains& g);
PidGains gains_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FuzzyInferenceSystem& fis);
FuzzyInferenceSystem fis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StepMetrics& m);

nlohmann::json to_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);

/// {"poles":[{"re":..,"im":..},"zeros":[...]} report payload.
nlohmann::json poles_zeros_json(const std::vector<std::complex<double>>& poles,
                                const std::vector<std::complex<double>>& zeros);

/// Matched parameters plus how they were obtained.
nlohmann::json ident_report_json(const IdentResult& result, const std::vector<double>& targets,
                                 std::uint64_t seed);

nlohmann::json to_json(const IdentProblem& prob);
/// Missing keys fall back to the fields of `defaults`.
IdentProblem ident_problem_from_json(const nlohmann::json& j, const IdentProblem& defaults);

// --- CSV ----------------------------------------------------------------

/// Header exactly `t,x,x_dot,theta,theta_dot,u,d`.
std::string trajectory_csv(const TrajectoryRecord& tr);
TrajectoryRecord trajectory_from_csv(const std::string& text);

/// Header `K,re_1,im_1,...,re_n,im_n`, one row per gain.
std::string locus_csv(const std::vector<RootLocusSample>& samples);

/// Header: input names then output names, comma separated.
std::string surface_csv(const SurfaceTable& table);

// --- Files --------------------------------------------------------------

/// Writes to a temp file in the target directory, then renames into
/// place, so the destination is never half-written.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace pendctl
