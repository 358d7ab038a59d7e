#pragma once

#include <optional>

namespace msa {

// Physical and protocol scalars of the Poisson bipolar network. Everything is
// stored in linear units; dB conversion happens once at the CLI boundary.
// Immutable after validation, safe to share across threads.
struct SystemParams {
  double density_lambda = 0.01;       // transmitters per unit area
  double arrival_rate_xi = 0.01;      // packets per slot per transmitter, in [0,1]
  double transmit_prob_p = 0.5;       // per-slot ALOHA gate probability, in (0,1]
  double link_distance_r0 = 5.0;      // transmitter-receiver separation
  double pathloss_alpha = 3.0;        // path loss exponent, > 2
  double sinr_threshold_theta = 10.0; // linear SINR threshold, > 0
  double noise_W = 0.0;               // normalized thermal noise power, >= 0
};

// Quantities derived from SystemParams that appear in every closed form.
struct DerivedConstants {
  double delta;          // 2 / alpha, in (0,1)
  double c0;             // pi * theta^delta * r0^2 * Gamma(1+delta) * Gamma(1-delta)
  double noise_exponent; // theta * W * r0^alpha
};

// Design targets that carve out the massive-and-sporadic operating region.
struct MsaThresholds {
  double success_floor_epsilon = 0.1; // minimum tolerable success probability
  double delay_ceiling_beta = 50.0;   // maximum tolerable mean delay, slots
  double regime_ratio_eta = 0.5;      // ratio threshold separating regimes, in (0,1]
};

enum class StabilityCause {
  Stable,
  FixedPointOutOfDomain, // the nonempty-probability fixed point has no real solution
  ArrivalExceedsService, // xi >= p * P0
  UtilizationAboveOne,   // zeta0 > 1
};

// Stationary solution of the decoupled (high-mobility) network. Optional
// fields act as tagged sentinels: delay/queue length absent means infinite,
// zeta0/P0 absent means the fixed point itself has no real solution.
struct StationaryMetrics {
  std::optional<double> nonempty_prob_zeta0;
  std::optional<double> success_prob_P0;
  std::optional<double> mean_delay_D0;
  std::optional<double> mean_queue_len_L0;
  bool stable = false;
  StabilityCause cause = StabilityCause::Stable;
};

// Returns the input unchanged when every invariant holds; throws
// ValidationError naming the offending field and bound otherwise.
SystemParams validate_params(const SystemParams& raw);

double db_to_linear(double value_db);

// delta = 2/alpha, c0 via the gamma reflection product, noise exponent.
// Requires validated params (alpha > 2 guarantees delta in (0,1)).
DerivedConstants derive_constants(const SystemParams& params);

// Checks eta in (0,1], the success floor against exp(-noise_exponent) and the
// delay ceiling against exp(noise_exponent). Throws ValidationError for the
// eta bound, WindowError for the two validity windows.
void validate_thresholds(const MsaThresholds& thresholds, const DerivedConstants& derived);

}  // namespace msa
