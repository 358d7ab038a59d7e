#include <cmath>
#include <vector>

#include <doctest.h>

#include "msa/analytics.hpp"
#include "msa/errors.hpp"
#include "msa/math_core.hpp"
#include "msa/params.hpp"

using namespace msa;

namespace {

// Reference setup: r0 = 5, theta = 10 (linear), alpha = 3, p = 0.5.
SystemParams base_params(double W, double lambda = 0.01, double xi = 0.01,
                         double p = 0.5, double alpha = 3.0) {
  SystemParams out;
  out.density_lambda = lambda;
  out.arrival_rate_xi = xi;
  out.transmit_prob_p = p;
  out.link_distance_r0 = 5.0;
  out.pathloss_alpha = alpha;
  out.sinr_threshold_theta = 10.0;
  out.noise_W = W;
  return out;
}

// Independent oracle for the stationary solution: iterate the nonempty-
// probability fixed point directly, no Lambert W involved.
struct FixedPointOracle {
  double zeta, p0, delay;
  bool converged;
};

FixedPointOracle stationary_fixed_point_oracle(const SystemParams& p) {
  const DerivedConstants d = derive_constants(p);
  double zeta = p.arrival_rate_xi / p.transmit_prob_p;
  FixedPointOracle out{0.0, 0.0, 0.0, false};
  for (int i = 0; i < 100000; ++i) {
    const double next = (p.arrival_rate_xi / p.transmit_prob_p) *
                        std::exp(p.transmit_prob_p * zeta * p.density_lambda * d.c0 +
                                 d.noise_exponent);
    if (std::abs(next - zeta) < 1e-14) {
      zeta = next;
      out.converged = true;
      break;
    }
    zeta = next;
  }
  out.zeta = zeta;
  out.p0 = std::exp(-p.transmit_prob_p * zeta * p.density_lambda * d.c0 - d.noise_exponent);
  out.delay = (1.0 - p.arrival_rate_xi) /
              (p.transmit_prob_p * out.p0 - p.arrival_rate_xi);
  return out;
}

}  // namespace

TEST_CASE("success_prob_poisson") {
  SystemParams p = base_params(0.0);
  CHECK(success_prob_poisson(0.0, p) == 1.0);

  p = base_params(1e-4); // noise exponent 0.125
  CHECK(success_prob_poisson(0.0, p) == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));
  CHECK(success_prob_poisson(0.0, p) == doctest::Approx(0.88250).epsilon(1e-4));

  // Inverse relationship with the massive threshold.
  MsaThresholds t;
  t.success_floor_epsilon = 0.1;
  const double lambda0 = massive_threshold(p, t);
  CHECK(success_prob_poisson(lambda0, p) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(lambda0 == doctest::Approx(0.00247).epsilon(2e-3));
}

TEST_CASE("geo_geo1_mean_delay") {
  CHECK(*geo_geo1_mean_delay(0.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(*geo_geo1_mean_delay(0.25, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_FALSE(geo_geo1_mean_delay(0.5, 0.5).has_value());
  CHECK_FALSE(geo_geo1_mean_delay(0.7, 0.5).has_value());
  CHECK_THROWS_AS(geo_geo1_mean_delay(-0.1, 0.5), DomainError);
  CHECK_THROWS_AS(geo_geo1_mean_delay(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(geo_geo1_mean_delay(0.1, 1.5), DomainError);
}

TEST_CASE("massive_threshold") {
  SystemParams p = base_params(1e-4);
  MsaThresholds t;
  t.success_floor_epsilon = 0.1;
  CHECK(massive_threshold(p, t) == doctest::Approx(0.0024697).epsilon(1e-4));

  // Critical density collapses as the path loss exponent approaches 2.
  SystemParams p_low = base_params(1e-4);
  p_low.pathloss_alpha = 2.01;
  CHECK(massive_threshold(p_low, t) < massive_threshold(p, t));
  SystemParams p_tiny = base_params(1e-4);
  p_tiny.pathloss_alpha = 2.0001;
  CHECK(massive_threshold(p_tiny, t) < 1e-6);

  // Noise-free: lambda0 = ln(10)/c0 for epsilon = 0.1.
  SystemParams p0 = base_params(0.0);
  const DerivedConstants d0 = derive_constants(p0);
  CHECK(massive_threshold(p0, t) == doctest::Approx(std::log(10.0) / d0.c0).epsilon(1e-12));

  // Strictly decreasing in epsilon.
  double prev = 1e9;
  for (double eps : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8}) {
    t.success_floor_epsilon = eps;
    const double v = massive_threshold(p, t);
    CHECK(v < prev);
    prev = v;
  }

  t.success_floor_epsilon = 0.9; // outside the validity window at this noise
  CHECK_THROWS_AS(massive_threshold(p, t), WindowError);
}

TEST_CASE("sporadic_threshold") {
  SystemParams p = base_params(1e-4); // noise exponent 0.125
  MsaThresholds t;
  t.delay_ceiling_beta = 50.0;
  CHECK(sporadic_threshold(p, t) == doctest::Approx(0.880098).epsilon(1e-5));

  // Noise-free limit: any beta > 1 admits every arrival rate.
  SystemParams p0 = base_params(0.0);
  for (double beta : {1.5, 10.0, 1e6}) {
    t.delay_ceiling_beta = beta;
    CHECK(sporadic_threshold(p0, t) == doctest::Approx(1.0).epsilon(1e-15));
  }

  // Large-beta limit approaches the noise-only success probability.
  t.delay_ceiling_beta = 1e12;
  CHECK(sporadic_threshold(p, t) == doctest::Approx(std::exp(-0.125)).epsilon(1e-9));

  // Strictly increasing in beta.
  double prev = 0.0;
  for (double beta : {2.0, 5.0, 20.0, 100.0, 1000.0}) {
    t.delay_ceiling_beta = beta;
    const double v = sporadic_threshold(p, t);
    CHECK(v > prev);
    prev = v;
  }

  t.delay_ceiling_beta = 1.1; // below exp(0.125) = 1.133
  CHECK_THROWS_AS(sporadic_threshold(p, t), WindowError);
}

TEST_CASE("msa_region composition and membership") {
  SystemParams p = base_params(1e-4);
  MsaThresholds t;
  t.success_floor_epsilon = 0.1;
  t.delay_ceiling_beta = 50.0;
  const MsaRegion region = msa_region(p, t);
  CHECK(region.lambda0 == doctest::Approx(0.00247).epsilon(2e-3));
  CHECK(region.xi0 == doctest::Approx(0.8801).epsilon(1e-4));
  CHECK(region.contains(0.01, 0.01));
  CHECK_FALSE(region.contains(region.lambda0 / 2.0, region.xi0));
  CHECK_FALSE(region.contains(0.01, 0.9));
}

TEST_CASE("interference_limited_boundary") {
  MsaThresholds t;
  t.regime_ratio_eta = 1.0;
  SystemParams p0 = base_params(0.0);
  CHECK(interference_limited_boundary(p0, t) == 0.0);

  // Doubling p halves the boundary.
  t.regime_ratio_eta = 0.5;
  SystemParams pa = base_params(1e-4, 0.01, 0.01, 0.25);
  SystemParams pb = base_params(1e-4, 0.01, 0.01, 0.5);
  CHECK(interference_limited_boundary(pa, t) ==
        doctest::Approx(2.0 * interference_limited_boundary(pb, t)).epsilon(1e-12));

  // At the boundary the success-probability ratio equals eta exactly.
  SystemParams p = base_params(std::pow(10.0, -3.4), 0.01, 0.01, 1.0, 3.5);
  const DerivedConstants d = derive_constants(p);
  const double bound = interference_limited_boundary(p, t);
  CHECK(bound > 0.0);
  CHECK(std::isfinite(bound));
  const double p_inter = std::exp(-bound * p.transmit_prob_p * d.c0);
  const double p_noise = std::exp(-d.noise_exponent);
  CHECK(std::abs(p_inter / p_noise - t.regime_ratio_eta) <= 1e-10);
}

TEST_CASE("noise_limited_boundary") {
  MsaThresholds t;
  t.regime_ratio_eta = 0.5;
  SystemParams p = base_params(1e-4); // noise exponent 0.125 < ln 2: no region
  CHECK(noise_limited_boundary(p, t) == 0.0);

  // ln(eta) = 0 case: boundary = noise_exponent / (c0 * e^noise_exponent).
  t.regime_ratio_eta = 1.0;
  SystemParams p1 = base_params(8e-4); // noise exponent exactly 1
  const DerivedConstants d1 = derive_constants(p1);
  CHECK(d1.noise_exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(noise_limited_boundary(p1, t) ==
        doctest::Approx(1.0 / (d1.c0 * std::exp(1.0))).epsilon(1e-12));

  // Boundary identity where the region exists.
  t.regime_ratio_eta = 0.5;
  SystemParams p2 = base_params(std::pow(10.0, -3.2), 0.01, 0.01, 1.0, 3.5);
  const DerivedConstants d2 = derive_constants(p2);
  const double bound = noise_limited_boundary(p2, t);
  REQUIRE(bound > 0.0);
  const double p_inter = std::exp(-bound * d2.c0 * std::exp(d2.noise_exponent));
  const double p_noise = std::exp(-d2.noise_exponent);
  CHECK(std::abs(p_noise / p_inter - t.regime_ratio_eta) <= 1e-10);

  // Rises then falls in alpha at W = 10^-3.2.
  std::vector<double> values;
  for (double alpha : {2.5, 3.0, 3.5, 4.0, 4.5, 5.0})
    values.push_back(noise_limited_boundary(
        base_params(std::pow(10.0, -3.2), 0.01, 0.01, 1.0, alpha), t));
  size_t argmax = 0;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[argmax]) argmax = i;
  CHECK(argmax > 0);
  CHECK(argmax < values.size() - 1);
  CHECK(values.front() < values[argmax]);
  CHECK(values.back() < values[argmax]);
}

TEST_CASE("classify_regime") {
  MsaThresholds t;
  t.regime_ratio_eta = 0.5;

  // Heavy traffic: above the interference boundary.
  SystemParams heavy = base_params(1e-4, 1.0, 0.9, 1.0);
  CHECK(classify_regime(heavy, t).kind == Regime::InterferenceLimited);
  CHECK(classify_regime(heavy, t).traffic_factor == doctest::Approx(0.9).epsilon(1e-12));

  // Zero traffic with a positive noise-limited boundary.
  SystemParams quiet = base_params(8e-4, 0.01, 0.0, 1.0); // noise exponent 1 > -ln(0.5)
  REQUIRE(noise_limited_boundary(quiet, t) > 0.0);
  CHECK(classify_regime(quiet, t).kind == Regime::NoiseLimited);

  // A point strictly between the boundaries.
  SystemParams mid = base_params(8e-4, 0.01, 0.05, 1.0);
  const double tf = mid.arrival_rate_xi * mid.density_lambda;
  REQUIRE(tf > noise_limited_boundary(mid, t));
  REQUIRE(tf < interference_limited_boundary(mid, t));
  CHECK(classify_regime(mid, t).kind == Regime::Intermediate);
}

TEST_CASE("interference_correlation") {
  CHECK(interference_correlation(0.5) == 0.25);
  CHECK(interference_correlation(1.0) == 0.5);
  CHECK_THROWS_AS(interference_correlation(0.0), DomainError);
  CHECK_THROWS_AS(interference_correlation(1.0001), DomainError);
}

TEST_CASE("backlogged and joint success probabilities") {
  SystemParams p = base_params(1e-4);

  // p -> 0 limits.
  SystemParams p_small = p;
  p_small.transmit_prob_p = 1e-12;
  CHECK(backlogged_success_prob(p_small) == doctest::Approx(std::exp(-0.125)).epsilon(1e-9));
  CHECK(joint_success_prob(p_small) == doctest::Approx(std::exp(-0.25)).epsilon(1e-9));

  // p = 1 consistency with the Poisson success probability.
  SystemParams p_one = p;
  p_one.transmit_prob_p = 1.0;
  CHECK(backlogged_success_prob(p_one) ==
        doctest::Approx(success_prob_poisson(p.density_lambda, p)).epsilon(1e-15));

  // Positive correlation: joint beats the squared marginal.
  for (double lam : {1e-4, 1e-3, 1e-2}) {
    SystemParams q = base_params(1e-4, lam);
    const double single = backlogged_success_prob(q);
    CHECK(joint_success_prob(q) > single * single);
  }
}

TEST_CASE("success_correlation values and limits") {
  SystemParams p = base_params(1e-4); // delta = 2/3, noise exponent 0.125
  const DerivedConstants d = derive_constants(p);

  CHECK(success_correlation_at(1.0 / d.c0, d) == doctest::Approx(0.24552).epsilon(1e-3));
  CHECK(success_correlation_at(1e-6 / d.c0, d) < 1e-3);
  CHECK(success_correlation_at(1e3 / d.c0, d) < 1e-3);
  CHECK_THROWS_AS(success_correlation_at(0.0, d), DomainError);

  // Nonnegative over a wide log grid.
  for (int i = 0; i <= 80; ++i) {
    const double plc = std::pow(10.0, -5.0 + 10.0 * i / 80.0);
    CHECK(success_correlation_at(plc / d.c0, d) >= 0.0);
  }
}

TEST_CASE("success_correlation is unimodal with the argmax at the computed optimum") {
  const SystemParams p = base_params(std::pow(10.0, -3.3));
  const DerivedConstants d = derive_constants(p);
  const double pl_star = max_correlation_point_at(d);
  REQUIRE(pl_star > 0.0);

  const int n = 60;
  std::vector<double> grid(n), rho(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = std::pow(10.0, -5.0 + 4.0 * i / (n - 1));
    rho[i] = success_correlation_at(grid[i], d);
  }
  size_t argmax = 0;
  int direction_changes = 0;
  for (size_t i = 1; i < rho.size(); ++i) {
    if (rho[i] > rho[argmax]) argmax = i;
    if (i >= 2 && (rho[i] > rho[i - 1]) != (rho[i - 1] > rho[i - 2])) ++direction_changes;
  }
  CHECK(direction_changes <= 1); // unimodal on the sampled grid
  REQUIRE(argmax > 0);
  REQUIRE(argmax < rho.size() - 1);
  CHECK(grid[argmax - 1] <= pl_star);
  CHECK(pl_star <= grid[argmax + 1]);
}

TEST_CASE("max_correlation_point against a fine-grid scan") {
  const SystemParams p = base_params(1e-4); // a = 0.4126, b = 0.8825
  const DerivedConstants d = derive_constants(p);
  const double a = 2.0 - std::pow(2.0, d.delta);
  const double b = std::exp(-d.noise_exponent);
  CHECK(a == doctest::Approx(0.4126).epsilon(1e-4));
  CHECK(b == doctest::Approx(0.8825).epsilon(1e-4));

  const auto g = [a, b](double t) {
    return (a - 1.0) * std::pow(t, a) - a * b * std::pow(t, a - 1.0) + 1.0;
  };
  double scan_root = 0.0;
  for (double t = 1.0 + 1e-6; t < 50.0; t += 1e-5) {
    if (g(t) <= 0.0) {
      scan_root = t;
      break;
    }
  }
  REQUIRE(scan_root > 1.0);
  const double pl_star = max_correlation_point(p);
  const double t0 = std::exp(pl_star * d.c0);
  CHECK(t0 == doctest::Approx(scan_root).epsilon(1e-4));
  CHECK(t0 == doctest::Approx(1.72).epsilon(5e-3));
  CHECK(std::abs(g(t0)) <= 1e-10);

  // Local-maximum property.
  const double at_star = success_correlation_at(pl_star, d);
  CHECK(at_star >= success_correlation_at(0.9 * pl_star, d));
  CHECK(at_star >= success_correlation_at(1.1 * pl_star, d));
}

TEST_CASE("max_correlation_point large-noise asymptote") {
  // noise exponent 30: the optimum approaches -ln(2^delta - 1)/((2-2^delta) c0).
  SystemParams p = base_params(30.0 / 1250.0);
  const DerivedConstants d = derive_constants(p);
  REQUIRE(d.noise_exponent == doctest::Approx(30.0).epsilon(1e-12));
  const double a = 2.0 - std::pow(2.0, d.delta);
  const double limit = -std::log(std::pow(2.0, d.delta) - 1.0) / (a * d.c0);
  CHECK(max_correlation_point(p) == doctest::Approx(limit).epsilon(0.01));
}

TEST_CASE("max_correlation_point noise-free edge") {
  CHECK(max_correlation_point(base_params(0.0)) == 0.0);
}

TEST_CASE("stationary_solution at the reference point") {
  const SystemParams p = base_params(std::pow(10.0, -3.3));
  const StationaryMetrics m = stationary_solution(p);
  REQUIRE(m.stable);
  CHECK(m.cause == StabilityCause::Stable);
  CHECK(*m.nonempty_prob_zeta0 == doctest::Approx(0.0458).epsilon(1e-3));
  CHECK(*m.success_prob_P0 == doctest::Approx(0.4367).epsilon(1e-3));
  CHECK(*m.mean_delay_D0 == doctest::Approx(4.75).epsilon(1e-3));
  CHECK(*m.mean_queue_len_L0 == doctest::Approx(0.0475).epsilon(1e-3));
  CHECK(*m.mean_queue_len_L0 == p.arrival_rate_xi * *m.mean_delay_D0); // Little's law exactly

  // Independent fixed-point iteration oracle.
  const FixedPointOracle oracle = stationary_fixed_point_oracle(p);
  REQUIRE(oracle.converged);
  CHECK(*m.nonempty_prob_zeta0 == doctest::Approx(oracle.zeta).epsilon(1e-9));
  CHECK(*m.success_prob_P0 == doctest::Approx(oracle.p0).epsilon(1e-9));
  CHECK(*m.mean_delay_D0 == doctest::Approx(oracle.delay).epsilon(1e-8));
}

TEST_CASE("stationary_solution limits and instability causes") {
  // lambda -> 0 recovers the noise-only success probability.
  SystemParams p = base_params(std::pow(10.0, -3.3), 1e-12);
  const DerivedConstants d = derive_constants(p);
  CHECK(*stationary_solution(p).success_prob_P0 ==
        doctest::Approx(std::exp(-d.noise_exponent)).epsilon(1e-9));

  // xi = 0: empty queues, unit utilization margin, delay 1/(p*P0).
  SystemParams idle = base_params(std::pow(10.0, -3.3), 0.01, 0.0);
  const StationaryMetrics mi = stationary_solution(idle);
  REQUIRE(mi.stable);
  CHECK(*mi.nonempty_prob_zeta0 == 0.0);
  CHECK(*mi.mean_queue_len_L0 == 0.0);

  // Fixed point out of the Lambert domain.
  SystemParams overload = base_params(std::pow(10.0, -3.3), 0.01, 0.5);
  const StationaryMetrics mo = stationary_solution(overload);
  CHECK_FALSE(mo.stable);
  CHECK(mo.cause == StabilityCause::FixedPointOutOfDomain);
  CHECK_FALSE(mo.nonempty_prob_zeta0.has_value());
  CHECK_FALSE(mo.mean_delay_D0.has_value());

  // Fixed point exists but service cannot keep up.
  SystemParams tight = base_params(std::pow(10.0, -3.3), 0.001, 0.04, 0.05);
  const StationaryMetrics mt = stationary_solution(tight);
  CHECK_FALSE(mt.stable);
  CHECK(mt.cause == StabilityCause::ArrivalExceedsService);
  CHECK(mt.nonempty_prob_zeta0.has_value());
  CHECK_FALSE(mt.mean_delay_D0.has_value());
  CHECK_FALSE(mt.mean_queue_len_L0.has_value());
}

TEST_CASE("stationary success probability peaks at an interior path loss exponent") {
  // Low alpha drowns the link in interference, high alpha starves the desired
  // signal; the success curve over alpha rises and then falls.
  std::vector<double> alphas, p0s;
  for (double alpha = 2.3; alpha <= 3.6 + 1e-9; alpha += 0.05) {
    const StationaryMetrics m = stationary_solution(base_params(std::pow(10.0, -3.3),
                                                                0.01, 0.01, 0.5, alpha));
    if (!m.stable) continue;
    alphas.push_back(alpha);
    p0s.push_back(*m.success_prob_P0);
  }
  REQUIRE(p0s.size() >= 10);
  size_t argmax = 0;
  for (size_t i = 1; i < p0s.size(); ++i)
    if (p0s[i] > p0s[argmax]) argmax = i;
  CHECK(argmax > 0);
  CHECK(argmax < p0s.size() - 1);
  CHECK(p0s.front() < p0s[argmax]);
  CHECK(p0s.back() < p0s[argmax]);
}

TEST_CASE("stationary_solution identities and monotonicity over a stable grid") {
  double worst_fp = 0.0, worst_util = 0.0;
  for (int i = 0; i < 10; ++i) {
    double prev_p0_in_xi = 2.0, prev_d0_in_xi = 0.0;
    for (int j = 0; j < 10; ++j) {
      const double lambda = 0.002 + 0.001 * i;
      const double xi = 0.002 + 0.001 * j;
      const SystemParams p = base_params(std::pow(10.0, -3.3), lambda, xi);
      const DerivedConstants d = derive_constants(p);
      const StationaryMetrics m = stationary_solution(p);
      REQUIRE(m.stable);
      const double zeta = *m.nonempty_prob_zeta0;
      const double lhs = (xi / p.transmit_prob_p) *
                         std::exp(p.transmit_prob_p * zeta * lambda * d.c0 + d.noise_exponent);
      worst_fp = std::max(worst_fp, std::abs(lhs - zeta));
      worst_util = std::max(worst_util,
                            std::abs(zeta * p.transmit_prob_p * *m.success_prob_P0 - xi));
      // P0 non-increasing and D0 non-decreasing in xi.
      CHECK(*m.success_prob_P0 < prev_p0_in_xi + 1e-15);
      CHECK(*m.mean_delay_D0 > prev_d0_in_xi - 1e-15);
      prev_p0_in_xi = *m.success_prob_P0;
      prev_d0_in_xi = *m.mean_delay_D0;
    }
  }
  CHECK(worst_fp <= 1e-10);
  CHECK(worst_util <= 1e-10);

  // P0 non-increasing in lambda at fixed xi.
  double prev = 2.0;
  for (int i = 0; i < 10; ++i) {
    const SystemParams p = base_params(std::pow(10.0, -3.3), 0.002 + 0.001 * i, 0.01);
    const double p0 = *stationary_solution(p).success_prob_P0;
    CHECK(p0 < prev + 1e-15);
    prev = p0;
  }
}
