#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msa/params.hpp"
#include "msa/sim_engine.hpp"

namespace msa {

enum class SweepVariable { Alpha, Xi, Lambda, P, NoiseW, PLambda };

struct Sweep {
  SweepVariable variable;
  double start = 0.0;
  double stop = 0.0;
  int points = 2;
  bool log_scale = false;
};

enum class OutputMode { Analytics, Simulation, Both };

// One experiment: base parameters, thresholds, simulation settings, and an
// optional sweep over a single variable.
struct ExperimentSpec {
  std::string name = "experiment";
  SystemParams params;
  MsaThresholds thresholds;
  SimConfig sim;
  std::optional<Sweep> sweep;
  OutputMode outputs = OutputMode::Both;
};

// Parses and validates a config document. theta comes as exactly one of
// theta_linear / theta_db, noise as exactly one of noise_W / noise_log10;
// the dB and log10 forms are converted here, once. Throws ValidationError
// naming the offending field.
ExperimentSpec parse_experiment(const nlohmann::json& doc);

ExperimentSpec load_experiment(const std::string& path); // throws IoError too

std::string sweep_variable_name(SweepVariable v);
SweepVariable sweep_variable_from_name(const std::string& name);

// Grid of swept values, linear or logarithmic.
std::vector<double> sweep_grid(const Sweep& sweep);

// Applies a swept value on top of the base parameters. PLambda sets
// transmit_prob_p = 1 and density_lambda = value (every closed form involved
// depends only on the product).
SystemParams apply_sweep(SystemParams base, SweepVariable variable, double value);

// Fully resolved config (linear theta, plain noise_W) for the CSV header;
// reproducing the run needs nothing else.
nlohmann::json canonical_json(const ExperimentSpec& spec);

// Serializes a double for CSV output; infinities print as the literal "inf".
// Absent optionals print the given token: "inf" for the infinite-delay
// sentinels, "nan" where no value exists at all.
std::string csv_number(double value);
std::string csv_number(const std::optional<double>& value, const char* absent = "inf");

}  // namespace msa
