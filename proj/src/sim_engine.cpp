#include "msa/sim_engine.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "msa/errors.hpp"

namespace msa {

void validate_config(const SimConfig& config) {
  if (!(config.margin >= 0.0))
    throw ValidationError("margin must be nonnegative");
  if (!(config.window_side > 2.0 * config.margin))
    throw ValidationError("window_side must exceed twice the margin");
  if (config.num_realizations < 1)
    throw ValidationError("num_realizations must be at least 1");
  if (config.num_slots < 1)
    throw ValidationError("num_slots must be at least 1");
  if (config.warmup_slots < 0 || config.warmup_slots >= config.num_slots)
    throw ValidationError("warmup_slots must lie in [0, num_slots)");
  if (config.corr_lag < 1)
    throw ValidationError("corr_lag must be at least 1");
}

double sinr(double own_fading, double link_distance_r0, double pathloss_alpha,
            double interference, double noise_W) {
  return own_fading * std::pow(link_distance_r0, -pathloss_alpha) /
         (interference + noise_W);
}

namespace {

double pairloss(const Topology& topo, int rx_link, int tx_link, double neg_half_alpha) {
  const double dx = topo.links[tx_link].tx_x - topo.links[rx_link].rx_x;
  const double dy = topo.links[tx_link].tx_y - topo.links[rx_link].rx_y;
  return std::pow(dx * dx + dy * dy, neg_half_alpha);
}

void init_workspace(SlotWorkspace& ws, const Topology& topo, const SystemParams& params,
                    const SimConfig& cfg, RealizationRecord& rec) {
  const int n = static_cast<int>(topo.links.size());
  const bool backlogged = cfg.traffic == Traffic::Backlogged;
  const bool is_static = cfg.mobility == Mobility::Static;
  const double neg_half_alpha = -0.5 * params.pathloss_alpha;

  ws.probes.clear();
  if (backlogged) {
    // Static runs probe the interior links; under high mobility no link is
    // persistently near an edge, so every link is a probe.
    for (int i = 0; i < n; ++i)
      if (!is_static || topo.interior(i)) ws.probes.push_back(i);
  }

  ws.weights.clear();
  if (is_static) {
    const int rows = backlogged ? static_cast<int>(ws.probes.size()) : n;
    ws.weights.resize(static_cast<size_t>(rows) * n);
    for (int r = 0; r < rows; ++r) {
      const int j = backlogged ? ws.probes[r] : r;
      for (int i = 0; i < n; ++i)
        ws.weights[static_cast<size_t>(r) * n + i] =
            (i == j) ? 0.0 : pairloss(topo, j, i, neg_half_alpha);
    }
  }

  ws.gate.assign(n, 0);
  ws.success_flags.assign(n, 0);
  ws.active_list.clear();
  ws.active_list.reserve(n);
  ws.prev_interference.assign(ws.probes.size() * cfg.corr_lag, 0.0);
  ws.prev_success.assign(ws.probes.size() * cfg.corr_lag, 0);
  ws.trace.active.assign(n, 0);
  ws.trace.success.assign(n, 0);
  ws.trace.interference.assign(n, 0.0);

  if (cfg.keep_traces) {
    rec.interference_trace.assign(ws.probes.size(), {});
    rec.success_trace.assign(ws.probes.size(), {});
    for (auto& t : rec.interference_trace) t.reserve(cfg.num_slots);
    for (auto& t : rec.success_trace) t.reserve(cfg.num_slots);
  }
  ws.ready = true;
}

}  // namespace

void step_slot(Topology& topo, std::vector<LinkState>& states,
               const SystemParams& params, const SimConfig& cfg,
               int64_t slot, Rng& rng, SlotWorkspace& ws, RealizationRecord& rec) {
  const int n = static_cast<int>(topo.links.size());
  const bool backlogged = cfg.traffic == Traffic::Backlogged;
  const bool is_static = cfg.mobility == Mobility::Static;
  const bool stats_slot = slot >= cfg.warmup_slots;
  const double theta = params.sinr_threshold_theta;
  const double noise = params.noise_W;
  const double own_pow = std::pow(params.link_distance_r0, -params.pathloss_alpha);
  const double neg_half_alpha = -0.5 * params.pathloss_alpha;

  if (!ws.ready) init_workspace(ws, topo, params, cfg, rec);

  // (1) ALOHA gates. Only links holding a packet draw. Queue statistics are
  // sampled here, before any service.
  ws.active_list.clear();
  for (int i = 0; i < n; ++i) {
    const bool has_packet = backlogged || !states[i].queue.empty();
    if (!backlogged && stats_slot && topo.interior(i)) {
      rec.link_slots += 1;
      rec.queue_len_sum += static_cast<double>(states[i].queue.size());
      if (has_packet) rec.nonempty_link_slots += 1;
    }
    const bool on = has_packet && rng.bernoulli(params.transmit_prob_p);
    ws.gate[i] = on;
    ws.trace.active[i] = on;
    ws.trace.success[i] = 0;
    ws.trace.interference[i] = 0.0;
    if (on) ws.active_list.push_back(i);
  }

  // (2)+(3) fading and SINR for every measured receiver.
  if (backlogged) {
    const int lag = cfg.corr_lag;
    const int ring = static_cast<int>(slot % lag);
    for (size_t r = 0; r < ws.probes.size(); ++r) {
      const int j = ws.probes[r];
      const double h_own = rng.exponential();
      double interf = 0.0;
      if (is_static) {
        const double* wrow = ws.weights.data() + r * n;
        for (int i : ws.active_list)
          if (i != j) interf += rng.exponential() * wrow[i];
      } else {
        for (int i : ws.active_list)
          if (i != j) interf += rng.exponential() * pairloss(topo, j, i, neg_half_alpha);
      }
      const bool s = h_own * own_pow > theta * (interf + noise);
      ws.trace.active[j] = 1; // probes are measured unconditionally
      ws.trace.success[j] = s;
      ws.trace.interference[j] = interf;
      if (stats_slot) {
        rec.attempts += 1;
        rec.successes += s;
      }
      double& prev_i = ws.prev_interference[r * lag + ring];
      uint8_t& prev_s = ws.prev_success[r * lag + ring];
      if (slot >= cfg.warmup_slots + lag) {
        rec.interference_pairs.add(prev_i, interf);
        rec.success_pairs.add(prev_s, s ? 1.0 : 0.0);
        rec.joint_pairs += 1;
        rec.joint_successes += (prev_s && s);
      }
      prev_i = interf;
      prev_s = s;
      if (cfg.keep_traces) {
        rec.interference_trace[r].push_back(interf);
        rec.success_trace[r].push_back(s);
      }
    }
  } else {
    for (const int j : ws.active_list) {
      const double h_own = rng.exponential();
      double interf = 0.0;
      if (is_static) {
        const double* wrow = ws.weights.data() + static_cast<size_t>(j) * n;
        for (int i : ws.active_list)
          if (i != j) interf += rng.exponential() * wrow[i];
      } else {
        for (int i : ws.active_list)
          if (i != j) interf += rng.exponential() * pairloss(topo, j, i, neg_half_alpha);
      }
      const bool s = h_own * own_pow > theta * (interf + noise);
      ws.success_flags[j] = s;
      ws.trace.success[j] = s;
      ws.trace.interference[j] = interf;
      if (stats_slot && topo.interior(j)) {
        rec.attempts += 1;
        rec.successes += s;
      }
    }

    // (4) departures, just before boundary slot+1.
    for (const int j : ws.active_list) {
      if (!ws.success_flags[j]) continue;
      LinkState& st = states[j];
      const int64_t arrival = st.queue.front();
      st.queue.pop_front();
      const int64_t departure = slot + 1;
      st.delivered_count += 1;
      if (cfg.keep_packet_log) st.delivered.emplace_back(arrival, departure);
      if (departure > cfg.warmup_slots && topo.interior(j)) {
        rec.delay_sum += static_cast<double>(departure - arrival);
        rec.delay_count += 1;
      }
    }

    // (5) arrivals, just after boundary slot+1.
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(params.arrival_rate_xi)) {
        states[i].queue.push_back(slot + 1);
        states[i].arrivals += 1;
      }
    }
  }

  // (6) high mobility: fresh positions for the next slot.
  if (!is_static) resample_positions(topo, params, rng);
}

RealizationRecord run_realization(const SystemParams& params, const SimConfig& config,
                                  uint64_t realization_index) {
  Rng rng = Rng::for_stream(config.seed, realization_index);
  Topology topo = sample_topology(params, config, rng);
  const int n = static_cast<int>(topo.links.size());
  const bool high_mobility = config.mobility == Mobility::HighMobility;

  RealizationRecord rec;
  rec.num_links = n;
  std::vector<uint8_t> interior_at_start(n, 0);
  for (int i = 0; i < n; ++i) {
    interior_at_start[i] = topo.interior(i);
    rec.num_interior += interior_at_start[i];
  }

  std::vector<LinkState> states(n);
  SlotWorkspace ws;
  for (int64_t slot = 0; slot < config.num_slots; ++slot)
    step_slot(topo, states, params, config, slot, rng, ws, rec);

  if (config.traffic == Traffic::Bernoulli) {
    // Conservation-style counts. Under high mobility link positions are
    // exchangeable across slots, so every link contributes; static runs keep
    // the interior-only rule.
    for (int i = 0; i < n; ++i) {
      if (!high_mobility && !interior_at_start[i]) continue;
      rec.arrivals += states[i].arrivals;
      rec.delivered += states[i].delivered_count;
      rec.stranded += static_cast<int64_t>(states[i].queue.size());
    }
    if (config.keep_packet_log) {
      rec.packet_log.resize(n);
      for (int i = 0; i < n; ++i) rec.packet_log[i] = std::move(states[i].delivered);
    }
  }
  return rec;
}

namespace {

std::vector<RealizationRecord> run_all(const SystemParams& params, const SimConfig& config,
                                       int num_threads, bool parallel) {
  validate_params(params);
  validate_config(config);
  std::vector<RealizationRecord> records(config.num_realizations);
  std::string failure;

  if (parallel) {
#ifdef _OPENMP
    const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int r = 0; r < config.num_realizations; ++r) {
      try {
        records[r] = run_realization(params, config, static_cast<uint64_t>(r));
      } catch (const std::exception& e) {
#pragma omp critical
        failure = e.what();
      }
    }
#else
    (void)num_threads;
    for (int r = 0; r < config.num_realizations; ++r)
      records[r] = run_realization(params, config, static_cast<uint64_t>(r));
#endif
  } else {
    for (int r = 0; r < config.num_realizations; ++r)
      records[r] = run_realization(params, config, static_cast<uint64_t>(r));
  }

  if (!failure.empty()) throw ConvergenceError("run_simulation: " + failure);
  return records;
}

}  // namespace

std::vector<RealizationRecord> run_simulation(const SystemParams& params,
                                              const SimConfig& config, int num_threads) {
  return run_all(params, config, num_threads, true);
}

std::vector<RealizationRecord> run_simulation_serial(const SystemParams& params,
                                                     const SimConfig& config) {
  return run_all(params, config, 0, false);
}

}  // namespace msa
