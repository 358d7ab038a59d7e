#pragma once

#include <optional>

#include "msa/params.hpp"

namespace msa {

enum class Regime { InterferenceLimited, NoiseLimited, Intermediate };

struct RegimeClass {
  Regime kind;
  double traffic_factor; // xi * lambda
};

// Operating region for massive-and-sporadic access: density at least lambda0
// and arrival rate at most xi0.
struct MsaRegion {
  double lambda0; // minimum "massive" density
  double xi0;     // maximum "sporadic" arrival rate

  bool contains(double lambda, double xi) const {
    return lambda >= lambda0 && xi <= xi0;
  }
};

// Success probability of a link in a Poisson field of active interferers:
// exp(-active_density * C0 - theta*W*r0^alpha).
double success_prob_poisson(double active_density, const SystemParams& params);

// Mean delay of a discrete-time Geo/Geo/1 queue with arrival rate xi and
// service rate mu: (1-xi)/(mu-xi) when xi < mu, infinite (nullopt) otherwise.
std::optional<double> geo_geo1_mean_delay(double xi, double mu);

// Minimum density for which the fully backlogged, always-transmitting network
// drives the success probability down to the floor epsilon.
// Throws WindowError when epsilon >= exp(-noise_exponent).
double massive_threshold(const SystemParams& params, const MsaThresholds& thresholds);

// Maximum arrival rate keeping the interference-free (lambda -> 0, p = 1)
// mean delay at or below the ceiling beta.
// Throws WindowError when beta <= exp(noise_exponent).
double sporadic_threshold(const SystemParams& params, const MsaThresholds& thresholds);

MsaRegion msa_region(const SystemParams& params, const MsaThresholds& thresholds);

// Minimum traffic factor xi*lambda above which interference dominates noise
// by the factor eta (fresh-packets-only system, active probability xi*p).
double interference_limited_boundary(const SystemParams& params,
                                     const MsaThresholds& thresholds);

// Maximum traffic factor below which noise dominates interference by eta
// (queue-utilization thinning). Returns 0 when no noise-limited region
// exists, i.e. noise_exponent + ln(eta) <= 0.
double noise_limited_boundary(const SystemParams& params,
                              const MsaThresholds& thresholds);

RegimeClass classify_regime(const SystemParams& params, const MsaThresholds& thresholds);

// Temporal correlation coefficient of interference between two slots of a
// static backlogged network with Rayleigh fading: p/2. Independent of the
// density. (Only the Rayleigh specialization p/E[h^2] = p/2 is implemented.)
double interference_correlation(double p);

// Per-attempt success probability in the static backlogged network:
// exp(-p*lambda*C0 - noise_exponent).
double backlogged_success_prob(const SystemParams& params);

// Probability that the same link succeeds in two distinct slots of the static
// backlogged network: exp(-2*noise_exponent - p*lambda*2^delta*C0).
double joint_success_prob(const SystemParams& params);

// Temporal correlation coefficient of the success indicators:
// (exp((2-2^delta)*p*lambda*C0) - 1) / (exp(noise_exponent + p*lambda*C0) - 1).
double success_correlation(const SystemParams& params);
double success_correlation_at(double plambda, const DerivedConstants& derived);

// The p*lambda maximizing the success correlation: ln(t0)/C0 where t0 > 1 is
// the root of (a-1)t^a - a*b*t^(a-1) + 1 with a = 2-2^delta and
// b = exp(-noise_exponent). Bracketed from (1+1e-6), doubling hi until the
// sign changes. Returns 0 in the noise-free limit, where the correlation has
// no interior maximum.
double max_correlation_point(const SystemParams& params);
double max_correlation_point_at(const DerivedConstants& derived);

// Stationary solution of the decoupled network: nonempty probability via the
// principal-branch Lambert W of -xi*lambda*C0*exp(noise_exponent), success
// probability, mean delay, and queue length by Little's law. Instability is a
// result, never an error; the three causes are distinguished.
StationaryMetrics stationary_solution(const SystemParams& params);

}  // namespace msa
