#pragma once

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "msa/params.hpp"
#include "msa/rng.hpp"
#include "msa/topology.hpp"

namespace msa {

enum class Mobility { Static, HighMobility };
enum class Traffic { Bernoulli, Backlogged };

struct SimConfig {
  double window_side = 240.0;
  double margin = 20.0;
  int num_realizations = 200;
  int num_slots = 1000;
  Mobility mobility = Mobility::Static;
  Traffic traffic = Traffic::Bernoulli;
  uint64_t seed = 1;

  int warmup_slots = 0;         // slots excluded from the estimators (never from conservation counts)
  int corr_lag = 1;             // slot-pair lag for the backlogged correlation accumulators
  bool keep_packet_log = false; // retain per-packet (arrival, departure) pairs
  bool keep_traces = false;     // retain per-slot interference/success series of interior links
};

// Throws ValidationError naming the offending field.
void validate_config(const SimConfig& config);

// Per-link queue under the early-arrival convention: a packet arriving just
// after boundary t and departing just before boundary t+k has delay k, so the
// minimum delay is one slot.
struct LinkState {
  std::deque<int64_t> queue; // arrival boundary index per queued packet, FIFO
  std::vector<std::pair<int64_t, int64_t>> delivered; // kept only under keep_packet_log
  int64_t arrivals = 0;
  int64_t delivered_count = 0;
};

// One slot's per-link outcome row. In Bernoulli (queue) mode `active` means
// the link transmitted, and success implies active. In backlogged mode the
// interior links are measured unconditionally every slot (the measurement is
// conditioned on the link transmitting, as the success-probability
// definition requires), so their active flag is always set; the ALOHA gate
// then only thins each link's interference contribution to the others.
struct SlotTrace {
  std::vector<uint8_t> active;
  std::vector<uint8_t> success;
  std::vector<double> interference; // 0 where not measured
};

// Accumulates pooled (x_t, x_{t+lag}) pairs for a Pearson coefficient.
struct PairMoments {
  double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;

  void add(double x, double y) {
    n += 1.0;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }

  friend bool operator==(const PairMoments&, const PairMoments&) = default;
};

struct RealizationRecord {
  int num_links = 0;
  int num_interior = 0;

  // Queue-mode aggregates over interior links. Conservation counts cover the
  // whole run; the estimator sums honor warmup_slots.
  int64_t arrivals = 0;
  int64_t delivered = 0;
  int64_t stranded = 0;
  int64_t link_slots = 0;
  int64_t nonempty_link_slots = 0;
  double queue_len_sum = 0.0;
  int64_t attempts = 0;
  int64_t successes = 0;
  double delay_sum = 0.0;
  int64_t delay_count = 0;

  // Backlogged-mode accumulators over the interior (probe) links.
  PairMoments interference_pairs;
  PairMoments success_pairs;
  int64_t joint_pairs = 0;
  int64_t joint_successes = 0;

  // Optional logs for property tests and post-hoc estimation.
  std::vector<std::vector<std::pair<int64_t, int64_t>>> packet_log; // per link
  std::vector<std::vector<double>> interference_trace;              // per interior link
  std::vector<std::vector<uint8_t>> success_trace;

  friend bool operator==(const RealizationRecord&, const RealizationRecord&) = default;
};

// Scratch space reused across slots of one realization. step_slot initializes
// it on first use for the given topology.
struct SlotWorkspace {
  bool ready = false;
  std::vector<int> probes;     // fixed measured set in backlogged mode
  std::vector<double> weights; // measured-row x all-links pathloss matrix (static only)
  std::vector<int> active_list;
  std::vector<uint8_t> gate;
  std::vector<uint8_t> success_flags;
  std::vector<double> prev_interference; // lag-ring buffers, probes x corr_lag
  std::vector<uint8_t> prev_success;
  SlotTrace trace;
};

// SINR of one attempt: own_fading * r0^(-alpha) / (interference + noise).
double sinr(double own_fading, double link_distance_r0, double pathloss_alpha,
            double interference, double noise_W);

// Advances one slot in the exact order: (1) ALOHA gate draws, (2) fading for
// every needed pair, (3) SINR and success per measured link, (4) departures
// just before the boundary, (5) Bernoulli arrivals just after it,
// (6) high-mobility position resampling for the next slot.
void step_slot(Topology& topology, std::vector<LinkState>& states,
               const SystemParams& params, const SimConfig& config,
               int64_t slot, Rng& rng, SlotWorkspace& ws, RealizationRecord& rec);

// One full realization on its own derived RNG stream.
RealizationRecord run_realization(const SystemParams& params, const SimConfig& config,
                                  uint64_t realization_index);

// OpenMP-parallel driver over realizations. num_threads <= 0 uses the OpenMP
// default. Results are independent of the thread count.
std::vector<RealizationRecord> run_simulation(const SystemParams& params,
                                              const SimConfig& config,
                                              int num_threads = 0);

// Plain sequential reference kept for testing and benchmarking; must produce
// results identical to run_simulation.
std::vector<RealizationRecord> run_simulation_serial(const SystemParams& params,
                                                     const SimConfig& config);

}  // namespace msa
