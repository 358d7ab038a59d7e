#include "msa/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "msa/errors.hpp"

namespace msa {

namespace {

double require_number(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw ValidationError(std::string("missing field: ") + key);
  if (!obj[key].is_number()) throw ValidationError(std::string("field must be a number: ") + key);
  return obj[key].get<double>();
}

double optional_number(const nlohmann::json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ValidationError(std::string("field must be a number: ") + key);
  return obj[key].get<double>();
}

SystemParams parse_params(const nlohmann::json& p) {
  SystemParams out;
  out.density_lambda = require_number(p, "density_lambda");
  out.arrival_rate_xi = require_number(p, "arrival_rate_xi");
  out.transmit_prob_p = require_number(p, "transmit_prob_p");
  out.link_distance_r0 = require_number(p, "link_distance_r0");
  out.pathloss_alpha = require_number(p, "pathloss_alpha");

  const bool has_lin = p.contains("theta_linear");
  const bool has_db = p.contains("theta_db");
  if (has_lin == has_db)
    throw ValidationError("exactly one of theta_linear / theta_db is required");
  out.sinr_threshold_theta =
      has_lin ? require_number(p, "theta_linear") : db_to_linear(require_number(p, "theta_db"));

  const bool has_w = p.contains("noise_W");
  const bool has_log = p.contains("noise_log10");
  if (has_w && has_log)
    throw ValidationError("noise_W and noise_log10 are mutually exclusive");
  if (has_w)
    out.noise_W = require_number(p, "noise_W");
  else if (has_log)
    out.noise_W = std::pow(10.0, require_number(p, "noise_log10"));
  else
    throw ValidationError("missing field: noise_W (or noise_log10)");
  return validate_params(out);
}

MsaThresholds parse_thresholds(const nlohmann::json& doc) {
  MsaThresholds out;
  if (!doc.contains("thresholds")) return out;
  const auto& t = doc["thresholds"];
  out.success_floor_epsilon = optional_number(t, "success_floor_epsilon", out.success_floor_epsilon);
  out.delay_ceiling_beta = optional_number(t, "delay_ceiling_beta", out.delay_ceiling_beta);
  out.regime_ratio_eta = optional_number(t, "regime_ratio_eta", out.regime_ratio_eta);
  return out;
}

SimConfig parse_sim(const nlohmann::json& doc) {
  SimConfig out;
  out.num_realizations = 50; // desk-scale default; the full 200 is a config away
  if (!doc.contains("sim")) return out;
  const auto& s = doc["sim"];
  out.window_side = optional_number(s, "window_side", out.window_side);
  out.margin = optional_number(s, "margin", out.margin);
  out.num_realizations = static_cast<int>(optional_number(s, "num_realizations", out.num_realizations));
  out.num_slots = static_cast<int>(optional_number(s, "num_slots", out.num_slots));
  out.warmup_slots = static_cast<int>(optional_number(s, "warmup_slots", out.warmup_slots));
  out.corr_lag = static_cast<int>(optional_number(s, "corr_lag", out.corr_lag));
  if (s.contains("seed")) {
    if (!s["seed"].is_number_unsigned() && !s["seed"].is_number_integer())
      throw ValidationError("field must be an integer: seed");
    out.seed = s["seed"].get<uint64_t>();
  }
  if (s.contains("mobility")) {
    const std::string m = s["mobility"].get<std::string>();
    if (m == "static")
      out.mobility = Mobility::Static;
    else if (m == "high_mobility")
      out.mobility = Mobility::HighMobility;
    else
      throw ValidationError("mobility must be \"static\" or \"high_mobility\"");
  }
  if (s.contains("traffic")) {
    const std::string t = s["traffic"].get<std::string>();
    if (t == "bernoulli")
      out.traffic = Traffic::Bernoulli;
    else if (t == "backlogged")
      out.traffic = Traffic::Backlogged;
    else
      throw ValidationError("traffic must be \"bernoulli\" or \"backlogged\"");
  }
  return out;
}

std::optional<Sweep> parse_sweep(const nlohmann::json& doc) {
  if (!doc.contains("sweep")) return std::nullopt;
  const auto& s = doc["sweep"];
  Sweep out;
  if (!s.contains("variable")) throw ValidationError("missing field: sweep.variable");
  out.variable = sweep_variable_from_name(s["variable"].get<std::string>());
  out.start = require_number(s, "start");
  out.stop = require_number(s, "stop");
  out.points = static_cast<int>(require_number(s, "points"));
  if (s.contains("scale")) {
    const std::string sc = s["scale"].get<std::string>();
    if (sc == "log")
      out.log_scale = true;
    else if (sc != "linear")
      throw ValidationError("sweep.scale must be \"linear\" or \"log\"");
  }
  if (out.points < 2) throw ValidationError("sweep.points must be at least 2");
  if (out.log_scale && !(out.start > 0.0 && out.stop > 0.0))
    throw ValidationError("log sweep endpoints must be positive");
  return out;
}

}  // namespace

ExperimentSpec parse_experiment(const nlohmann::json& doc) {
  ExperimentSpec spec;
  if (doc.contains("name")) spec.name = doc["name"].get<std::string>();
  if (!doc.contains("params")) throw ValidationError("missing field: params");
  spec.params = parse_params(doc["params"]);
  spec.thresholds = parse_thresholds(doc);
  spec.sim = parse_sim(doc);
  validate_config(spec.sim);
  spec.sweep = parse_sweep(doc);
  if (doc.contains("outputs")) {
    const std::string o = doc["outputs"].get<std::string>();
    if (o == "analytics")
      spec.outputs = OutputMode::Analytics;
    else if (o == "simulation")
      spec.outputs = OutputMode::Simulation;
    else if (o == "both")
      spec.outputs = OutputMode::Both;
    else
      throw ValidationError("outputs must be \"analytics\", \"simulation\" or \"both\"");
  }
  // Every swept value must survive parameter validation.
  if (spec.sweep)
    for (double v : sweep_grid(*spec.sweep)) (void)validate_params(apply_sweep(spec.params, spec.sweep->variable, v));
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_experiment(doc);
}

std::string sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::Alpha: return "alpha";
    case SweepVariable::Xi: return "xi";
    case SweepVariable::Lambda: return "lambda";
    case SweepVariable::P: return "p";
    case SweepVariable::NoiseW: return "W";
    case SweepVariable::PLambda: return "plambda";
  }
  return "?";
}

SweepVariable sweep_variable_from_name(const std::string& name) {
  if (name == "alpha") return SweepVariable::Alpha;
  if (name == "xi") return SweepVariable::Xi;
  if (name == "lambda") return SweepVariable::Lambda;
  if (name == "p") return SweepVariable::P;
  if (name == "W") return SweepVariable::NoiseW;
  if (name == "plambda") return SweepVariable::PLambda;
  throw ValidationError("unknown sweep variable: " + name +
                        " (expected alpha, xi, lambda, p, W or plambda)");
}

std::vector<double> sweep_grid(const Sweep& sweep) {
  std::vector<double> grid(sweep.points);
  if (sweep.log_scale) {
    const double ls = std::log(sweep.start);
    const double le = std::log(sweep.stop);
    for (int i = 0; i < sweep.points; ++i)
      grid[i] = std::exp(ls + (le - ls) * i / (sweep.points - 1));
  } else {
    for (int i = 0; i < sweep.points; ++i)
      grid[i] = sweep.start + (sweep.stop - sweep.start) * i / (sweep.points - 1);
  }
  grid.front() = sweep.start;
  grid.back() = sweep.stop;
  return grid;
}

SystemParams apply_sweep(SystemParams base, SweepVariable variable, double value) {
  switch (variable) {
    case SweepVariable::Alpha: base.pathloss_alpha = value; break;
    case SweepVariable::Xi: base.arrival_rate_xi = value; break;
    case SweepVariable::Lambda: base.density_lambda = value; break;
    case SweepVariable::P: base.transmit_prob_p = value; break;
    case SweepVariable::NoiseW: base.noise_W = value; break;
    case SweepVariable::PLambda:
      base.transmit_prob_p = 1.0;
      base.density_lambda = value;
      break;
  }
  return base;
}

nlohmann::json canonical_json(const ExperimentSpec& spec) {
  nlohmann::json doc;
  doc["name"] = spec.name;
  doc["params"] = {
      {"density_lambda", spec.params.density_lambda},
      {"arrival_rate_xi", spec.params.arrival_rate_xi},
      {"transmit_prob_p", spec.params.transmit_prob_p},
      {"link_distance_r0", spec.params.link_distance_r0},
      {"pathloss_alpha", spec.params.pathloss_alpha},
      {"theta_linear", spec.params.sinr_threshold_theta},
      {"noise_W", spec.params.noise_W},
  };
  doc["thresholds"] = {
      {"success_floor_epsilon", spec.thresholds.success_floor_epsilon},
      {"delay_ceiling_beta", spec.thresholds.delay_ceiling_beta},
      {"regime_ratio_eta", spec.thresholds.regime_ratio_eta},
  };
  doc["sim"] = {
      {"window_side", spec.sim.window_side},
      {"margin", spec.sim.margin},
      {"num_realizations", spec.sim.num_realizations},
      {"num_slots", spec.sim.num_slots},
      {"mobility", spec.sim.mobility == Mobility::Static ? "static" : "high_mobility"},
      {"traffic", spec.sim.traffic == Traffic::Bernoulli ? "bernoulli" : "backlogged"},
      {"seed", spec.sim.seed},
      {"warmup_slots", spec.sim.warmup_slots},
      {"corr_lag", spec.sim.corr_lag},
  };
  if (spec.sweep) {
    doc["sweep"] = {
        {"variable", sweep_variable_name(spec.sweep->variable)},
        {"start", spec.sweep->start},
        {"stop", spec.sweep->stop},
        {"points", spec.sweep->points},
        {"scale", spec.sweep->log_scale ? "log" : "linear"},
    };
  }
  doc["outputs"] = spec.outputs == OutputMode::Analytics    ? "analytics"
                   : spec.outputs == OutputMode::Simulation ? "simulation"
                                                            : "both";
  return doc;
}

std::string csv_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string csv_number(const std::optional<double>& value, const char* absent) {
  return value ? csv_number(*value) : std::string(absent);
}

}  // namespace msa
