#include "msa/params.hpp"

#include <cmath>
#include <string>

#include "msa/errors.hpp"
#include "msa/math_core.hpp"

namespace msa {

SystemParams validate_params(const SystemParams& raw) {
  if (!(raw.density_lambda > 0.0))
    throw ValidationError("density_lambda must be positive");
  if (!(raw.arrival_rate_xi >= 0.0 && raw.arrival_rate_xi <= 1.0))
    throw ValidationError("arrival_rate_xi must lie in [0,1]");
  if (!(raw.transmit_prob_p > 0.0 && raw.transmit_prob_p <= 1.0))
    throw ValidationError("transmit_prob_p must lie in (0,1]");
  if (!(raw.link_distance_r0 > 0.0))
    throw ValidationError("link_distance_r0 must be positive");
  if (!(raw.pathloss_alpha > 2.0))
    throw ValidationError("pathloss_alpha must exceed 2");
  if (!(raw.sinr_threshold_theta > 0.0))
    throw ValidationError("sinr_threshold_theta must be positive");
  if (!(raw.noise_W >= 0.0))
    throw ValidationError("noise_W must be nonnegative");
  return raw;
}

double db_to_linear(double value_db) {
  return std::pow(10.0, value_db / 10.0);
}

DerivedConstants derive_constants(const SystemParams& params) {
  DerivedConstants d;
  d.delta = 2.0 / params.pathloss_alpha;
  const double pi = 3.14159265358979323846;
  d.c0 = pi * std::pow(params.sinr_threshold_theta, d.delta) *
         params.link_distance_r0 * params.link_distance_r0 *
         gamma_reflection_product(d.delta);
  d.noise_exponent = params.sinr_threshold_theta * params.noise_W *
                     std::pow(params.link_distance_r0, params.pathloss_alpha);
  return d;
}

void validate_thresholds(const MsaThresholds& thresholds, const DerivedConstants& derived) {
  if (!(thresholds.regime_ratio_eta > 0.0 && thresholds.regime_ratio_eta <= 1.0))
    throw ValidationError("regime_ratio_eta must lie in (0,1]");
  const double noise_only_success = std::exp(-derived.noise_exponent);
  if (!(thresholds.success_floor_epsilon > 0.0 &&
        thresholds.success_floor_epsilon < noise_only_success))
    throw WindowError("success_floor_epsilon must lie in (0, exp(-noise_exponent)) = (0, " +
                      std::to_string(noise_only_success) + ")");
  if (!(thresholds.delay_ceiling_beta > 1.0 / noise_only_success))
    throw WindowError("delay_ceiling_beta must exceed exp(noise_exponent) = " +
                      std::to_string(1.0 / noise_only_success));
}

}  // namespace msa
