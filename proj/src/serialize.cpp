#include "pendctl/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <type_traits>
#include <variant>

namespace pendctl {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional, const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw std::invalid_argument("unknown key \"" + key + "\" in " + what);
  }
  for (const std::string& key : required) {
    if (!j.contains(key)) throw std::invalid_argument(what + " is missing key \"" + key + "\"");
  }
}

double number_at(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument("\"" + key + "\" must be a number");
  return v.get<double>();
}

json mf_to_json(const MembershipFunction& mf) {
  json points = json::array();
  const int n = mf.shape == MembershipFunction::Shape::triangular ? 3 : 4;
  for (int i = 0; i < n; ++i) points.push_back(mf.points[static_cast<std::size_t>(i)]);
  return json{{"shape", mf.shape == MembershipFunction::Shape::triangular ? "triangular"
                                                                          : "trapezoidal"},
              {"points", points}};
}

MembershipFunction mf_from_json(const json& j) {
  require_keys(j, {"shape", "points"}, {}, "membership function");
  const std::string shape = j.at("shape").get<std::string>();
  const json& pts = j.at("points");
  if (shape == "triangular") {
    if (!pts.is_array() || pts.size() != 3) {
      throw std::invalid_argument("triangular membership needs 3 breakpoints");
    }
    return MembershipFunction::triangular(pts[0].get<double>(), pts[1].get<double>(),
                                          pts[2].get<double>());
  }
  if (shape == "trapezoidal") {
    if (!pts.is_array() || pts.size() != 4) {
      throw std::invalid_argument("trapezoidal membership needs 4 breakpoints");
    }
    return MembershipFunction::trapezoidal(pts[0].get<double>(), pts[1].get<double>(),
                                           pts[2].get<double>(), pts[3].get<double>());
  }
  throw std::invalid_argument("unknown membership shape \"" + shape + "\"");
}

json variable_to_json(const LinguisticVariable& var) {
  json terms = json::array();
  for (const LinguisticTerm& t : var.terms) {
    terms.push_back(json{{"name", t.name}, {"mf", mf_to_json(t.mf)}});
  }
  return json{{"name", var.name}, {"lo", var.lo}, {"hi", var.hi}, {"terms", terms}};
}

LinguisticVariable variable_from_json(const json& j) {
  require_keys(j, {"name", "lo", "hi", "terms"}, {}, "linguistic variable");
  LinguisticVariable var;
  var.name = j.at("name").get<std::string>();
  var.lo = number_at(j, "lo");
  var.hi = number_at(j, "hi");
  for (const json& t : j.at("terms")) {
    require_keys(t, {"name", "mf"}, {}, "linguistic term");
    var.terms.push_back({t.at("name").get<std::string>(), mf_from_json(t.at("mf"))});
  }
  return var;
}

const std::vector<std::string> kParamKeys = {
    "cart_mass",      "bob_mass",       "arm_length",         "pendulum_inertia",
    "gravity",        "viscous_friction", "motor_friction_alpha", "wheel_ground_mu",
    "gear_mu",        "drag_cd"};

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json to_json(const PhysicalParams& p) {
  return json{{"cart_mass", p.cart_mass},
              {"bob_mass", p.bob_mass},
              {"arm_length", p.arm_length},
              {"pendulum_inertia", p.pendulum_inertia},
              {"gravity", p.gravity},
              {"viscous_friction", p.viscous_friction},
              {"motor_friction_alpha", p.motor_friction_alpha},
              {"wheel_ground_mu", p.wheel_ground_mu},
              {"gear_mu", p.gear_mu},
              {"drag_cd", p.drag_cd}};
}

PhysicalParams params_from_json(const json& j) {
  require_keys(j, kParamKeys, {}, "physical parameters");
  PhysicalParams p;
  p.cart_mass = number_at(j, "cart_mass");
  p.bob_mass = number_at(j, "bob_mass");
  p.arm_length = number_at(j, "arm_length");
  p.pendulum_inertia = number_at(j, "pendulum_inertia");
  p.gravity = number_at(j, "gravity");
  p.viscous_friction = number_at(j, "viscous_friction");
  p.motor_friction_alpha = number_at(j, "motor_friction_alpha");
  p.wheel_ground_mu = number_at(j, "wheel_ground_mu");
  p.gear_mu = number_at(j, "gear_mu");
  p.drag_cd = number_at(j, "drag_cd");
  p.validate();
  return p;
}

json to_json(const PidGains& g) {
  return json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}};
}

PidGains gains_from_json(const json& j) {
  require_keys(j, {"kp", "ki", "kd"}, {}, "gains");
  PidGains g{number_at(j, "kp"), number_at(j, "ki"), number_at(j, "kd")};
  g.validate();
  return g;
}

json to_json(const FuzzyInferenceSystem& fis) {
  json inputs = json::array();
  for (const LinguisticVariable& v : fis.inputs()) inputs.push_back(variable_to_json(v));
  json outputs = json::array();
  for (const LinguisticVariable& v : fis.outputs()) outputs.push_back(variable_to_json(v));

  // A rule row is positional: one term name (or null) per input, then one
  // per output. Exactly one output entry is set per rule.
  json rules = json::array();
  for (const FuzzyRule& r : fis.rules()) {
    json antecedent(json::value_t::array);
    for (std::size_t i = 0; i < fis.inputs().size(); ++i) antecedent.push_back(nullptr);
    for (const auto& [var, term] : r.antecedent) {
      antecedent[var] = fis.inputs()[var].terms[term].name;
    }
    json consequent(json::value_t::array);
    for (std::size_t i = 0; i < fis.outputs().size(); ++i) consequent.push_back(nullptr);
    consequent[r.output_var] = fis.outputs()[r.output_var].terms[r.output_term].name;
    rules.push_back(json{{"if", antecedent}, {"then", consequent}});
  }
  return json{{"inputs", inputs}, {"outputs", outputs}, {"rules", rules}};
}

FuzzyInferenceSystem fis_from_json(const json& j) {
  require_keys(j, {"inputs", "outputs", "rules"}, {}, "fuzzy system");
  std::vector<LinguisticVariable> inputs;
  for (const json& v : j.at("inputs")) inputs.push_back(variable_from_json(v));
  std::vector<LinguisticVariable> outputs;
  for (const json& v : j.at("outputs")) outputs.push_back(variable_from_json(v));

  std::vector<FuzzyRule> rules;
  for (const json& rj : j.at("rules")) {
    require_keys(rj, {"if", "then"}, {}, "rule");
    const json& antecedent = rj.at("if");
    const json& consequent = rj.at("then");
    if (!antecedent.is_array() || antecedent.size() != inputs.size()) {
      throw std::invalid_argument("rule \"if\" must list one entry per input");
    }
    if (!consequent.is_array() || consequent.size() != outputs.size()) {
      throw std::invalid_argument("rule \"then\" must list one entry per output");
    }
    FuzzyRule rule;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (antecedent[i].is_null()) continue;
      rule.antecedent.emplace_back(i, inputs[i].term_index(antecedent[i].get<std::string>()));
    }
    int set_outputs = 0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      if (consequent[i].is_null()) continue;
      rule.output_var = i;
      rule.output_term = outputs[i].term_index(consequent[i].get<std::string>());
      ++set_outputs;
    }
    if (set_outputs != 1) {
      throw std::invalid_argument("rule \"then\" must set exactly one output");
    }
    rules.push_back(std::move(rule));
  }
  return FuzzyInferenceSystem(std::move(inputs), std::move(outputs), std::move(rules));
}

json to_json(const StepMetrics& m) {
  json j{{"settling_time_s", nullptr},
         {"overshoot_pct", m.overshoot_pct},
         {"sse_pct", m.steady_state_error_pct},
         {"peak_theta_rad", m.peak_theta},
         {"blew_up", m.blew_up}};
  if (m.settling_time_2pct) j["settling_time_s"] = *m.settling_time_2pct;
  return j;
}

namespace {

json controller_to_json(const ControllerSpec& spec) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PidControllerSpec>) {
          return json{{"type", "pid"}, {"gains", to_json(c.gains)}};
        } else if constexpr (std::is_same_v<T, PdControllerSpec>) {
          return json{{"type", "pd"}, {"gains", to_json(c.gains)}};
        } else if constexpr (std::is_same_v<T, FuzzyDirectSpec>) {
          return json{{"type", "fuzzy_direct"}, {"fis", to_json(c.fis)}};
        } else {
          return json{{"type", "fuzzy_scheduled_pid"},
                      {"scheduler", to_json(c.scheduler)},
                      {"base", to_json(c.base)}};
        }
      },
      spec);
}

ControllerSpec controller_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw std::invalid_argument("controller must be an object with a \"type\"");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "pid" || type == "pd") {
    require_keys(j, {"type", "gains"}, {}, "controller");
    const PidGains g = gains_from_json(j.at("gains"));
    if (type == "pid") return PidControllerSpec{g};
    return PdControllerSpec{make_pd(g.kp, g.kd)};
  }
  if (type == "fuzzy_direct") {
    require_keys(j, {"type"}, {"fis", "config"}, "controller");
    if (j.contains("fis")) return FuzzyDirectSpec{fis_from_json(j.at("fis"))};
    DirectControllerConfig cfg;
    if (j.contains("config")) {
      const json& c = j.at("config");
      require_keys(c, {}, {"theta_max", "theta_dot_max", "force_max"}, "fuzzy_direct config");
      if (c.contains("theta_max")) cfg.theta_max = number_at(c, "theta_max");
      if (c.contains("theta_dot_max")) cfg.theta_dot_max = number_at(c, "theta_dot_max");
      if (c.contains("force_max")) cfg.force_max = number_at(c, "force_max");
    }
    return FuzzyDirectSpec{build_direct_controller(cfg)};
  }
  if (type == "fuzzy_scheduled_pid") {
    require_keys(j, {"type", "base"}, {"scheduler", "config"}, "controller");
    const PidGains base = gains_from_json(j.at("base"));
    if (j.contains("scheduler")) {
      return FuzzyScheduledPidSpec{fis_from_json(j.at("scheduler")), base};
    }
    GainSchedulerConfig cfg;
    if (j.contains("config")) {
      const json& c = j.at("config");
      require_keys(c, {}, {"error_max", "kp_min", "kp_max", "kd_min", "kd_max"},
                   "gain scheduler config");
      if (c.contains("error_max")) cfg.error_max = number_at(c, "error_max");
      if (c.contains("kp_min")) cfg.kp_min = number_at(c, "kp_min");
      if (c.contains("kp_max")) cfg.kp_max = number_at(c, "kp_max");
      if (c.contains("kd_min")) cfg.kd_min = number_at(c, "kd_min");
      if (c.contains("kd_max")) cfg.kd_max = number_at(c, "kd_max");
    }
    return FuzzyScheduledPidSpec{build_gain_scheduler(cfg), base};
  }
  throw std::invalid_argument("unknown controller type \"" + type + "\"");
}

}  // namespace

json to_json(const Scenario& sc) {
  return json{{"params", to_json(sc.params)},
              {"model", sc.model == PlantModel::linear ? "linear" : "nonlinear"},
              {"drag_enabled", sc.drag_enabled},
              {"controller", controller_to_json(sc.controller)},
              {"reference_theta", sc.reference_theta},
              {"initial",
               json{{"x", sc.initial.x},
                    {"x_dot", sc.initial.x_dot},
                    {"theta", sc.initial.theta},
                    {"theta_dot", sc.initial.theta_dot}}},
              {"disturbance",
               json{{"kind", sc.disturbance.kind == Disturbance::Kind::none ? "none" : "impulse"},
                    {"amplitude", sc.disturbance.amplitude},
                    {"start_time", sc.disturbance.start_time},
                    {"width", sc.disturbance.width}}},
              {"duration", sc.duration},
              {"dt", sc.dt},
              {"metric_window_start", sc.metric_window_start},
              {"control_hold", sc.control_hold},
              {"limits", json{{"u_max", sc.limits.u_max}}}};
}

Scenario scenario_from_json(const json& j) {
  require_keys(j, {},
               {"params", "model", "drag_enabled", "controller", "reference_theta", "initial",
                "disturbance", "duration", "dt", "metric_window_start", "control_hold",
                "limits"},
               "scenario");
  Scenario sc;
  if (j.contains("params")) sc.params = params_from_json(j.at("params"));
  if (j.contains("model")) {
    const std::string model = j.at("model").get<std::string>();
    if (model == "linear") {
      sc.model = PlantModel::linear;
    } else if (model == "nonlinear") {
      sc.model = PlantModel::nonlinear;
    } else {
      throw std::invalid_argument("model must be \"linear\" or \"nonlinear\"");
    }
  }
  if (j.contains("drag_enabled")) sc.drag_enabled = j.at("drag_enabled").get<bool>();
  if (j.contains("controller")) sc.controller = controller_from_json(j.at("controller"));
  if (j.contains("reference_theta")) sc.reference_theta = number_at(j, "reference_theta");
  if (j.contains("initial")) {
    const json& s = j.at("initial");
    require_keys(s, {}, {"x", "x_dot", "theta", "theta_dot"}, "initial state");
    if (s.contains("x")) sc.initial.x = number_at(s, "x");
    if (s.contains("x_dot")) sc.initial.x_dot = number_at(s, "x_dot");
    if (s.contains("theta")) sc.initial.theta = number_at(s, "theta");
    if (s.contains("theta_dot")) sc.initial.theta_dot = number_at(s, "theta_dot");
  }
  if (j.contains("disturbance")) {
    const json& d = j.at("disturbance");
    require_keys(d, {"kind"}, {"amplitude", "start_time", "width"}, "disturbance");
    const std::string kind = d.at("kind").get<std::string>();
    if (kind == "none") {
      sc.disturbance.kind = Disturbance::Kind::none;
    } else if (kind == "impulse") {
      sc.disturbance.kind = Disturbance::Kind::impulse;
    } else {
      throw std::invalid_argument("disturbance kind must be \"none\" or \"impulse\"");
    }
    if (d.contains("amplitude")) sc.disturbance.amplitude = number_at(d, "amplitude");
    if (d.contains("start_time")) sc.disturbance.start_time = number_at(d, "start_time");
    if (d.contains("width")) sc.disturbance.width = number_at(d, "width");
  }
  if (j.contains("duration")) sc.duration = number_at(j, "duration");
  if (j.contains("dt")) sc.dt = number_at(j, "dt");
  if (j.contains("metric_window_start")) {
    sc.metric_window_start = number_at(j, "metric_window_start");
  }
  if (j.contains("control_hold")) sc.control_hold = j.at("control_hold").get<int>();
  if (j.contains("limits")) {
    const json& l = j.at("limits");
    require_keys(l, {"u_max"}, {}, "limits");
    sc.limits.u_max = number_at(l, "u_max");
  }
  sc.validate();
  return sc;
}

json poles_zeros_json(const std::vector<std::complex<double>>& poles,
                      const std::vector<std::complex<double>>& zeros) {
  const auto pack = [](const std::vector<std::complex<double>>& v) {
    json arr = json::array();
    for (const auto& z : v) arr.push_back(json{{"re", z.real()}, {"im", z.imag()}});
    return arr;
  };
  return json{{"poles", pack(poles)}, {"zeros", pack(zeros)}};
}

json to_json(const IdentProblem& prob) {
  json free_params = json::array();
  for (const BoundedParam& fp : prob.free_params) {
    free_params.push_back(json{{"name", fp.name}, {"lo", fp.lo}, {"hi", fp.hi}});
  }
  return json{{"target_poles", prob.target_poles},
              {"free_params", free_params},
              {"fixed", to_json(prob.fixed)},
              {"slave_inertia", prob.slave_inertia},
              {"restarts", prob.restarts},
              {"seed", prob.seed}};
}

IdentProblem ident_problem_from_json(const json& j, const IdentProblem& defaults) {
  require_keys(j, {},
               {"target_poles", "free_params", "fixed", "slave_inertia", "restarts", "seed"},
               "identification problem");
  IdentProblem prob = defaults;
  if (j.contains("target_poles")) {
    prob.target_poles.clear();
    for (const json& t : j.at("target_poles")) {
      if (!t.is_number()) throw std::invalid_argument("target poles must be numbers");
      prob.target_poles.push_back(t.get<double>());
    }
  }
  if (j.contains("free_params")) {
    prob.free_params.clear();
    for (const json& fp : j.at("free_params")) {
      require_keys(fp, {"name", "lo", "hi"}, {}, "free parameter");
      prob.free_params.push_back(
          {fp.at("name").get<std::string>(), number_at(fp, "lo"), number_at(fp, "hi")});
    }
  }
  if (j.contains("fixed")) prob.fixed = params_from_json(j.at("fixed"));
  if (j.contains("slave_inertia")) prob.slave_inertia = j.at("slave_inertia").get<bool>();
  if (j.contains("restarts")) prob.restarts = j.at("restarts").get<int>();
  if (j.contains("seed")) prob.seed = j.at("seed").get<std::uint64_t>();
  prob.validate();
  return prob;
}

json ident_report_json(const IdentResult& result, const std::vector<double>& targets,
                       std::uint64_t seed) {
  return json{{"params", to_json(result.params)},
              {"provenance", json{{"targets", targets},
                                  {"residual", result.residual},
                                  {"seed", seed},
                                  {"iterations", result.iterations},
                                  {"converged", result.converged}}}};
}

std::string trajectory_csv(const TrajectoryRecord& tr) {
  std::string out = "t,x,x_dot,theta,theta_dot,u,d\n";
  for (const TrajectoryRow& r : tr.rows) {
    out += fmt_double(r.t);
    for (double v : {r.x, r.x_dot, r.theta, r.theta_dot, r.u, r.d}) {
      out += ',';
      out += fmt_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<double> parse_csv_row(const std::string& line, std::size_t line_no) {
  std::vector<double> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    double v = 0.0;
    const auto res = std::from_chars(line.data() + pos, line.data() + comma, v);
    if (res.ec != std::errc{} || res.ptr != line.data() + comma) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                  ": cannot parse number \"" + line.substr(pos, comma - pos) +
                                  "\"");
    }
    fields.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return fields;
}

}  // namespace

TrajectoryRecord trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,x,x_dot,theta,theta_dot,u,d") {
    throw std::invalid_argument("trajectory CSV must start with t,x,x_dot,theta,theta_dot,u,d");
  }
  TrajectoryRecord tr;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<double> f = parse_csv_row(line, line_no);
    if (f.size() != 7) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected 7 fields");
    }
    tr.rows.push_back(TrajectoryRow{f[0], f[1], f[2], f[3], f[4], f[5], f[6]});
  }
  if (tr.rows.size() >= 2) tr.dt = tr.rows[1].t - tr.rows[0].t;
  return tr;
}

std::string locus_csv(const std::vector<RootLocusSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty locus sample list");
  const std::size_t n = samples.front().closed_loop_poles.size();
  std::string out = "K";
  for (std::size_t i = 1; i <= n; ++i) {
    out += ",re_" + std::to_string(i) + ",im_" + std::to_string(i);
  }
  out += '\n';
  for (const RootLocusSample& s : samples) {
    out += fmt_double(s.gain);
    for (const auto& pole : s.closed_loop_poles) {
      out += ',';
      out += fmt_double(pole.real());
      out += ',';
      out += fmt_double(pole.imag());
    }
    out += '\n';
  }
  return out;
}

std::string surface_csv(const SurfaceTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const std::vector<double>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::invalid_argument("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::invalid_argument("cannot move output into place: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace pendctl
