#include "msa/analytics.hpp"

#include <cmath>

#include "msa/errors.hpp"
#include "msa/math_core.hpp"

namespace msa {

namespace {
constexpr double kInvE = 0.36787944117144232160;
}

double success_prob_poisson(double active_density, const SystemParams& params) {
  const DerivedConstants d = derive_constants(params);
  return std::exp(-active_density * d.c0 - d.noise_exponent);
}

std::optional<double> geo_geo1_mean_delay(double xi, double mu) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("geo_geo1_mean_delay: xi outside [0,1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("geo_geo1_mean_delay: mu outside (0,1]");
  if (!(xi < mu)) return std::nullopt;
  return (1.0 - xi) / (mu - xi);
}

double massive_threshold(const SystemParams& params, const MsaThresholds& thresholds) {
  const DerivedConstants d = derive_constants(params);
  const double eps = thresholds.success_floor_epsilon;
  if (!(eps > 0.0 && eps < std::exp(-d.noise_exponent)))
    throw WindowError("success_floor_epsilon must lie in (0, exp(-noise_exponent))");
  return -(d.noise_exponent + std::log(eps)) / d.c0;
}

double sporadic_threshold(const SystemParams& params, const MsaThresholds& thresholds) {
  const DerivedConstants d = derive_constants(params);
  const double beta = thresholds.delay_ceiling_beta;
  if (!(beta > std::exp(d.noise_exponent)))
    throw WindowError("delay_ceiling_beta must exceed exp(noise_exponent)");
  return (beta * std::exp(-d.noise_exponent) - 1.0) / (beta - 1.0);
}

MsaRegion msa_region(const SystemParams& params, const MsaThresholds& thresholds) {
  return MsaRegion{massive_threshold(params, thresholds),
                   sporadic_threshold(params, thresholds)};
}

double interference_limited_boundary(const SystemParams& params,
                                     const MsaThresholds& thresholds) {
  const DerivedConstants d = derive_constants(params);
  return (d.noise_exponent - std::log(thresholds.regime_ratio_eta)) /
         (params.transmit_prob_p * d.c0);
}

double noise_limited_boundary(const SystemParams& params,
                              const MsaThresholds& thresholds) {
  const DerivedConstants d = derive_constants(params);
  const double numerator = d.noise_exponent + std::log(thresholds.regime_ratio_eta);
  if (numerator <= 0.0) return 0.0; // no noise-limited region
  return numerator / (d.c0 * std::exp(d.noise_exponent));
}

RegimeClass classify_regime(const SystemParams& params, const MsaThresholds& thresholds) {
  const double tf = params.arrival_rate_xi * params.density_lambda;
  const double noise_bound = noise_limited_boundary(params, thresholds);
  if (noise_bound > 0.0 && tf <= noise_bound)
    return RegimeClass{Regime::NoiseLimited, tf};
  if (tf >= interference_limited_boundary(params, thresholds))
    return RegimeClass{Regime::InterferenceLimited, tf};
  return RegimeClass{Regime::Intermediate, tf};
}

double interference_correlation(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("interference_correlation: p outside (0,1]");
  return p / 2.0;
}

double backlogged_success_prob(const SystemParams& params) {
  const DerivedConstants d = derive_constants(params);
  return std::exp(-params.transmit_prob_p * params.density_lambda * d.c0 -
                  d.noise_exponent);
}

double joint_success_prob(const SystemParams& params) {
  const DerivedConstants d = derive_constants(params);
  const double plc = params.transmit_prob_p * params.density_lambda * d.c0;
  return std::exp(-2.0 * d.noise_exponent - plc * std::pow(2.0, d.delta));
}

double success_correlation_at(double plambda, const DerivedConstants& derived) {
  if (!(plambda > 0.0))
    throw DomainError("success_correlation: requires p*lambda > 0");
  const double x = plambda * derived.c0;
  const double a = 2.0 - std::pow(2.0, derived.delta);
  if (a * x > 600.0) // both expm1 terms overflow; use the exact large-x ratio
    return std::exp((a - 1.0) * x - derived.noise_exponent);
  return std::expm1(a * x) / std::expm1(derived.noise_exponent + x);
}

double success_correlation(const SystemParams& params) {
  return success_correlation_at(params.transmit_prob_p * params.density_lambda,
                                derive_constants(params));
}

double max_correlation_point_at(const DerivedConstants& derived) {
  if (derived.noise_exponent == 0.0) return 0.0;
  const double a = 2.0 - std::pow(2.0, derived.delta);
  const double b = std::exp(-derived.noise_exponent);
  const auto g = [a, b](double t) {
    return (a - 1.0) * std::pow(t, a) - a * b * std::pow(t, a - 1.0) + 1.0;
  };
  const double lo = 1.0 + 1e-6;
  if (g(lo) <= 0.0) return std::log(lo) / derived.c0; // optimum indistinguishable from p*lambda = 0
  double hi = 2.0;
  // g is monotone decreasing on (1,inf) with g(1) = a(1-b) > 0, so exactly one
  // sign change exists; double until we straddle it.
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1.8e19) throw ConvergenceError("max_correlation_point: no sign change found");
  }
  const double t0 = solve_bracketed_root(g, lo, hi, NumericTolerances{1e-13, 128});
  return std::log(t0) / derived.c0;
}

double max_correlation_point(const SystemParams& params) {
  return max_correlation_point_at(derive_constants(params));
}

StationaryMetrics stationary_solution(const SystemParams& params) {
  const DerivedConstants d = derive_constants(params);
  const double xi = params.arrival_rate_xi;
  const double p = params.transmit_prob_p;
  const double lambda = params.density_lambda;

  StationaryMetrics out;
  const double z = -xi * lambda * d.c0 * std::exp(d.noise_exponent);
  if (z < -kInvE) {
    out.stable = false;
    out.cause = StabilityCause::FixedPointOutOfDomain;
    return out;
  }
  const double w = lambert_w0(z);
  const double zeta0 = (xi == 0.0) ? 0.0 : -w / (p * lambda * d.c0);
  const double p0 = std::exp(w - d.noise_exponent);
  out.nonempty_prob_zeta0 = zeta0;
  out.success_prob_P0 = p0;
  if (!(xi < p * p0)) {
    out.stable = false;
    out.cause = StabilityCause::ArrivalExceedsService;
    return out;
  }
  if (zeta0 > 1.0) {
    out.stable = false;
    out.cause = StabilityCause::UtilizationAboveOne;
    return out;
  }
  out.stable = true;
  out.cause = StabilityCause::Stable;
  out.mean_delay_D0 = (1.0 - xi) / (p * p0 - xi);
  out.mean_queue_len_L0 = xi * *out.mean_delay_D0;
  return out;
}

}  // namespace msa
