#include "msa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "msa/analytics.hpp"
#include "msa/errors.hpp"
#include "msa/experiment.hpp"
#include "msa/math_core.hpp"
#include "msa/rng.hpp"
#include "msa/stats.hpp"

namespace msa {

namespace {

int thread_cap() {
  const char* env = std::getenv("MSA_THREADS");
  if (!env || !*env) return 0;
  const int v = std::atoi(env);
  return v > 0 ? v : 0;
}

Sweep parse_sweep_flag(const std::string& text, const std::string& fixed_variable) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  Sweep out;
  size_t off = 0;
  if (fixed_variable.empty()) {
    if (parts.size() < 4) throw ValidationError("--sweep expects VAR:START:STOP:POINTS[:log]");
    out.variable = sweep_variable_from_name(parts[0]);
    off = 1;
  } else {
    if (parts.size() < 3) throw ValidationError("--" + fixed_variable + "-sweep expects START:STOP:POINTS");
    out.variable = sweep_variable_from_name(fixed_variable);
  }
  try {
    out.start = std::stod(parts[off]);
    out.stop = std::stod(parts[off + 1]);
    out.points = std::stoi(parts[off + 2]);
  } catch (const std::exception&) {
    throw ValidationError("sweep grid values must be numeric");
  }
  if (parts.size() > off + 3) {
    if (parts[off + 3] == "log")
      out.log_scale = true;
    else if (parts[off + 3] != "linear")
      throw ValidationError("sweep scale must be \"linear\" or \"log\"");
  }
  if (out.points < 2) throw ValidationError("sweep points must be at least 2");
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + out_path);
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing output file: " + out_path);
}

std::string config_header(const ExperimentSpec& spec) {
  return "# config: " + canonical_json(spec).dump() + "\n";
}

const char* cause_name(StabilityCause c) {
  switch (c) {
    case StabilityCause::Stable: return "stable";
    case StabilityCause::FixedPointOutOfDomain: return "fixed_point_out_of_domain";
    case StabilityCause::ArrivalExceedsService: return "arrival_exceeds_service";
    case StabilityCause::UtilizationAboveOne: return "utilization_above_one";
  }
  return "?";
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::InterferenceLimited: return "interference_limited";
    case Regime::NoiseLimited: return "noise_limited";
    case Regime::Intermediate: return "intermediate";
  }
  return "?";
}

const Sweep& require_sweep(const ExperimentSpec& spec, const char* command) {
  if (!spec.sweep)
    throw ValidationError(std::string(command) +
                          " needs a sweep (config \"sweep\" block, --sweep, or --alpha-sweep)");
  return *spec.sweep;
}

std::string emit_region(const ExperimentSpec& spec) {
  const Sweep& sweep = require_sweep(spec, "region");
  std::ostringstream os;
  os << config_header(spec);
  const std::string var = sweep_variable_name(sweep.variable);
  os << var << ",lambda0,xi0\n";
  for (double v : sweep_grid(sweep)) {
    const SystemParams p = validate_params(apply_sweep(spec.params, sweep.variable, v));
    const MsaRegion region = msa_region(p, spec.thresholds);
    os << csv_number(v) << ',' << csv_number(region.lambda0) << ',' << csv_number(region.xi0)
       << '\n';
  }
  return os.str();
}

std::string emit_regimes(const ExperimentSpec& spec) {
  const Sweep& sweep = require_sweep(spec, "regimes");
  std::ostringstream os;
  os << config_header(spec);
  os << sweep_variable_name(sweep.variable)
     << ",traffic_factor,interference_boundary,noise_boundary,regime\n";
  for (double v : sweep_grid(sweep)) {
    const SystemParams p = validate_params(apply_sweep(spec.params, sweep.variable, v));
    const RegimeClass rc = classify_regime(p, spec.thresholds);
    os << csv_number(v) << ',' << csv_number(rc.traffic_factor) << ','
       << csv_number(interference_limited_boundary(p, spec.thresholds)) << ','
       << csv_number(noise_limited_boundary(p, spec.thresholds)) << ','
       << regime_name(rc.kind) << '\n';
  }
  return os.str();
}

std::string emit_correlate(const ExperimentSpec& spec) {
  const Sweep& sweep = require_sweep(spec, "correlate");
  std::ostringstream os;
  os << config_header(spec);
  if (sweep.variable == SweepVariable::PLambda) {
    // Curve of the success correlation over p*lambda; the optimum and the
    // (density-free) interference correlation ride along as constant columns.
    const DerivedConstants d = derive_constants(spec.params);
    const double pl_star = max_correlation_point_at(d);
    const double rho_i = interference_correlation(spec.params.transmit_prob_p);
    os << "plambda,success_corr,interference_corr,plambda_star\n";
    for (double v : sweep_grid(sweep)) {
      os << csv_number(v) << ',' << csv_number(success_correlation_at(v, d)) << ','
         << csv_number(rho_i) << ',' << csv_number(pl_star) << '\n';
    }
    return os.str();
  }
  if (sweep.variable == SweepVariable::NoiseW || sweep.variable == SweepVariable::Alpha) {
    // Location of the correlation optimum as the swept parameter moves.
    os << sweep_variable_name(sweep.variable) << ",plambda_star,corr_at_star\n";
    for (double v : sweep_grid(sweep)) {
      const SystemParams p = validate_params(apply_sweep(spec.params, sweep.variable, v));
      const DerivedConstants d = derive_constants(p);
      const double pl_star = max_correlation_point_at(d);
      const double rho = pl_star > 0.0 ? success_correlation_at(pl_star, d)
                                       : std::numeric_limits<double>::quiet_NaN();
      os << csv_number(v) << ',' << csv_number(pl_star) << ',' << csv_number(rho) << '\n';
    }
    return os.str();
  }
  throw ValidationError("correlate sweeps plambda (curve) or W / alpha (optimum location)");
}

std::string emit_analytic(const ExperimentSpec& spec) {
  const Sweep& sweep = require_sweep(spec, "analytic");
  std::ostringstream os;
  os << config_header(spec);
  os << sweep_variable_name(sweep.variable) << ",zeta0,P0,D0,L0,stable,cause\n";
  for (double v : sweep_grid(sweep)) {
    const SystemParams p = validate_params(apply_sweep(spec.params, sweep.variable, v));
    const StationaryMetrics m = stationary_solution(p);
    os << csv_number(v) << ',' << csv_number(m.nonempty_prob_zeta0, "nan") << ','
       << csv_number(m.success_prob_P0, "nan") << ',' << csv_number(m.mean_delay_D0, "inf")
       << ',' << csv_number(m.mean_queue_len_L0, "inf") << ',' << (m.stable ? 1 : 0) << ','
       << cause_name(m.cause) << '\n';
  }
  return os.str();
}

std::string emit_simulate(const ExperimentSpec& spec, int threads) {
  std::ostringstream os;
  os << config_header(spec);
  const bool backlogged = spec.sim.traffic == Traffic::Backlogged;
  const bool with_analytics = spec.outputs != OutputMode::Simulation;

  std::vector<double> grid{0.0};
  std::string var = "point";
  if (spec.sweep) {
    grid = sweep_grid(*spec.sweep);
    var = sweep_variable_name(spec.sweep->variable);
  }

  os << var;
  if (with_analytics) os << ",zeta0,P0,D0,L0,stable";
  os << ",nonempty_mean,nonempty_std,delay_mean,delay_std,success_mean,success_std,stranded_fraction";
  if (backlogged)
    os << ",interference_corr,interference_corr_se,success_corr,success_corr_se,joint_success_freq";
  os << '\n';

  for (double v : grid) {
    const SystemParams p =
        spec.sweep ? validate_params(apply_sweep(spec.params, spec.sweep->variable, v))
                   : spec.params;
    const auto records = run_simulation(p, spec.sim, threads);
    const SimEstimates est = aggregate(records, spec.sim.traffic);

    os << csv_number(v);
    if (with_analytics) {
      const StationaryMetrics m = stationary_solution(p);
      os << ',' << csv_number(m.nonempty_prob_zeta0, "nan") << ','
         << csv_number(m.success_prob_P0, "nan") << ',' << csv_number(m.mean_delay_D0, "inf")
         << ',' << csv_number(m.mean_queue_len_L0, "inf") << ',' << (m.stable ? 1 : 0);
    }
    os << ',' << csv_number(est.nonempty_prob.mean) << ',' << csv_number(est.nonempty_prob.std_dev);
    if (est.mean_delay)
      os << ',' << csv_number(est.mean_delay->mean) << ',' << csv_number(est.mean_delay->std_dev);
    else
      os << ",nan,nan";
    os << ',' << csv_number(est.success_prob.mean) << ',' << csv_number(est.success_prob.std_dev)
       << ',' << csv_number(est.stranded_fraction);
    if (backlogged) {
      if (est.interference_corr)
        os << ',' << csv_number(est.interference_corr->estimate) << ','
           << csv_number(est.interference_corr->std_error);
      else
        os << ",nan,nan";
      if (est.success_corr)
        os << ',' << csv_number(est.success_corr->estimate) << ','
           << csv_number(est.success_corr->std_error);
      else
        os << ",nan,nan";
      os << ',' << csv_number(est.joint_success_freq ? *est.joint_success_freq
                                                     : std::numeric_limits<double>::quiet_NaN());
    }
    os << '\n';
  }
  return os.str();
}

// Quick Monte Carlo vs closed-form oracle suite. Prints one line per check.
bool run_selftest(int threads, std::ostream& os) {
  bool all_ok = true;
  const auto report = [&](const char* name, bool ok, const std::string& detail) {
    os << (ok ? "ok   " : "FAIL ") << name << "  " << detail << "\n";
    all_ok = all_ok && ok;
  };

  { // Lambert W residual sweep
    double worst = 0.0;
    const double lo = -0.36787944117144233 + 1e-9;
    for (int i = 0; i < 50; ++i) {
      const double s = std::exp(std::log(1e-9) + (std::log(1e6 + 0.368) - std::log(1e-9)) * i / 49.0);
      const double z = lo - 1e-9 + s;
      const double w = lambert_w0(z);
      worst = std::max(worst, std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)));
    }
    report("lambert_w0 residual", worst <= 1e-12, "max_rel_residual=" + csv_number(worst));
  }

  { // fixed-point identity on a stable grid
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        SystemParams p;
        p.density_lambda = 0.002 + 0.002 * i;
        p.arrival_rate_xi = 0.002 + 0.002 * j;
        p.noise_W = std::pow(10.0, -3.3);
        const DerivedConstants d = derive_constants(p);
        const StationaryMetrics m = stationary_solution(p);
        if (!m.stable) continue;
        const double z = *m.nonempty_prob_zeta0;
        const double lhs = (p.arrival_rate_xi / p.transmit_prob_p) *
                           std::exp(p.transmit_prob_p * z * p.density_lambda * d.c0 + d.noise_exponent);
        worst = std::max(worst, std::abs(lhs - z));
      }
    report("stationary fixed point", worst <= 1e-10, "max_residual=" + csv_number(worst));
  }

  { // Geo/Geo/1 mean delay vs direct queue Monte Carlo
    const double xi = 0.25, mu = 0.5;
    Rng rng(20240801);
    int64_t delivered = 0;
    double delay_sum = 0.0;
    std::deque<int64_t> queue;
    for (int64_t slot = 0; delivered < 200000; ++slot) {
      if (!queue.empty() && rng.bernoulli(mu)) {
        delay_sum += static_cast<double>(slot + 1 - queue.front());
        queue.pop_front();
        ++delivered;
      }
      if (rng.bernoulli(xi)) queue.push_back(slot + 1);
    }
    const double mc = delay_sum / static_cast<double>(delivered);
    const double formula = *geo_geo1_mean_delay(xi, mu);
    const double rel = std::abs(mc - formula) / formula;
    report("geo_geo1 delay vs Monte Carlo", rel < 0.015,
           "mc=" + csv_number(mc) + " formula=" + csv_number(formula));
  }

  { // backlogged interference correlation vs p/2
    SystemParams p;
    p.density_lambda = 0.005;
    p.arrival_rate_xi = 0.01;
    p.noise_W = std::pow(10.0, -3.3);
    SimConfig cfg;
    cfg.traffic = Traffic::Backlogged;
    cfg.num_realizations = 6;
    cfg.num_slots = 1200;
    cfg.seed = 91;
    const auto records = run_simulation(p, cfg, threads);
    const SimEstimates est = aggregate(records, Traffic::Backlogged);
    const double target = interference_correlation(p.transmit_prob_p);
    const bool ok = est.interference_corr &&
                    std::abs(est.interference_corr->estimate - target) <=
                        4.0 * est.interference_corr->std_error;
    report("interference correlation vs p/2", ok,
           est.interference_corr
               ? "estimate=" + csv_number(est.interference_corr->estimate) + " se=" +
                     csv_number(est.interference_corr->std_error) + " target=" + csv_number(target)
               : "degenerate");
  }

  { // static queue simulation vs the decoupled stationary solution
    SystemParams p;
    p.noise_W = std::pow(10.0, -3.3);
    SimConfig cfg;
    cfg.num_realizations = 10;
    cfg.num_slots = 800;
    cfg.seed = 17;
    const auto records = run_simulation(p, cfg, threads);
    const SimEstimates est = aggregate(records, Traffic::Bernoulli);
    const StationaryMetrics m = stationary_solution(p);
    const double rel = std::abs(est.nonempty_prob.mean - *m.nonempty_prob_zeta0) /
                       *m.nonempty_prob_zeta0;
    report("static sim nonempty vs analytic", rel < 0.2,
           "sim=" + csv_number(est.nonempty_prob.mean) + " analytic=" +
               csv_number(*m.nonempty_prob_zeta0));
  }

  return all_ok;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Analytics and Monte Carlo simulation for massive sporadic-access"
               " wireless networks (Poisson bipolar model with interacting queues)"};
  app.require_subcommand(1);

  std::string config_path, out_path, sweep_flag, alpha_sweep_flag;
  uint64_t seed = 0;
  bool seed_set = false;
  int realizations = 0, slots = 0, warmup = -1, corr_lag = 0, threads = 0;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* copt = cmd->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) copt->required();
    cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
    cmd->add_option("--seed", seed, "override the RNG root seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--realizations", realizations, "override sim.num_realizations");
    cmd->add_option("--slots", slots, "override sim.num_slots");
    cmd->add_option("--warmup", warmup, "override sim.warmup_slots");
    cmd->add_option("--corr-lag", corr_lag, "override sim.corr_lag");
    cmd->add_option("--threads", threads, "worker threads (MSA_THREADS caps this)");
    cmd->add_option("--sweep", sweep_flag, "VAR:START:STOP:POINTS[:log] override");
    cmd->add_option("--alpha-sweep", alpha_sweep_flag, "START:STOP:POINTS over the path loss exponent");
  };

  auto* region = app.add_subcommand("region", "operating-region thresholds lambda0 and xi0 over a sweep");
  auto* regimes = app.add_subcommand("regimes", "interference/noise-limited boundaries and classification");
  auto* correlate = app.add_subcommand("correlate", "temporal success-correlation curve and its optimum");
  auto* analytic = app.add_subcommand("analytic", "stationary solution (zeta0, P0, D0, L0) over a sweep");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation with analytics side by side");
  auto* selftest = app.add_subcommand("selftest", "quick Monte Carlo vs closed-form oracle suite");
  for (auto* cmd : {region, regimes, correlate, analytic, simulate}) add_common(cmd, true);
  selftest->add_option("--threads", threads, "worker threads (MSA_THREADS caps this)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const int cap = thread_cap();
    int effective_threads = threads;
    if (cap > 0) effective_threads = effective_threads > 0 ? std::min(effective_threads, cap) : cap;

    if (selftest->parsed()) {
      const bool ok = run_selftest(effective_threads, std::cout);
      return ok ? 0 : 2;
    }

    ExperimentSpec spec = load_experiment(config_path);
    if (seed_set) spec.sim.seed = seed;
    if (realizations > 0) spec.sim.num_realizations = realizations;
    if (slots > 0) spec.sim.num_slots = slots;
    if (warmup >= 0) spec.sim.warmup_slots = warmup;
    if (corr_lag > 0) spec.sim.corr_lag = corr_lag;
    if (!alpha_sweep_flag.empty()) spec.sweep = parse_sweep_flag(alpha_sweep_flag, "alpha");
    if (!sweep_flag.empty()) spec.sweep = parse_sweep_flag(sweep_flag, "");
    validate_config(spec.sim);
    if (spec.sweep)
      for (double v : sweep_grid(*spec.sweep))
        (void)validate_params(apply_sweep(spec.params, spec.sweep->variable, v));

    std::string csv;
    if (region->parsed()) csv = emit_region(spec);
    else if (regimes->parsed()) csv = emit_regimes(spec);
    else if (correlate->parsed()) csv = emit_correlate(spec);
    else if (analytic->parsed()) csv = emit_analytic(spec);
    else if (simulate->parsed()) csv = emit_simulate(spec, effective_threads);
    write_output(csv, out_path);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const WindowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) { // Domain/Bracket/Convergence and anything numeric
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace msa
