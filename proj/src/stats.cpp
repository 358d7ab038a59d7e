#include "msa/stats.hpp"

#include <cmath>

#include "msa/errors.hpp"

namespace msa {

namespace {

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  const size_t n = values.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return out;
}

double fisher_std_error(double rho, double n) {
  if (n <= 3.0) return 1.0;
  return (1.0 - rho * rho) / std::sqrt(n - 3.0);
}

}  // namespace

double pearson_of(const PairMoments& m) {
  if (m.n < 2.0) throw DegenerateVariance("pearson: fewer than two pairs");
  const double mx = m.sx / m.n;
  const double my = m.sy / m.n;
  const double vx = m.sxx / m.n - mx * mx;
  const double vy = m.syy / m.n - my * my;
  if (!(vx > 0.0) || !(vy > 0.0))
    throw DegenerateVariance("pearson: a series is constant");
  return (m.sxy / m.n - mx * my) / std::sqrt(vx * vy);
}

MeanStd estimate_nonempty(std::span<const RealizationRecord> records) {
  if (records.empty()) throw EmptyInput("estimate_nonempty: no records");
  std::vector<double> fractions;
  fractions.reserve(records.size());
  for (const auto& rec : records)
    if (rec.link_slots > 0)
      fractions.push_back(static_cast<double>(rec.nonempty_link_slots) /
                          static_cast<double>(rec.link_slots));
  if (fractions.empty()) throw EmptyInput("estimate_nonempty: no sampled link-slots");
  return mean_std(fractions);
}

MeanStd estimate_delay(std::span<const RealizationRecord> records) {
  if (records.empty()) throw EmptyInput("estimate_delay: no records");
  std::vector<double> means;
  means.reserve(records.size());
  for (const auto& rec : records)
    if (rec.delay_count > 0)
      means.push_back(rec.delay_sum / static_cast<double>(rec.delay_count));
  if (means.empty()) throw NoDeliveredPackets("estimate_delay: no delivered packets");
  return mean_std(means);
}

CorrEstimate pearson_over_slots(const std::vector<std::vector<double>>& series, int lag,
                                Pooling pooling) {
  if (lag < 1) throw DomainError("pearson_over_slots: lag must be at least 1");
  if (series.empty()) throw EmptyInput("pearson_over_slots: no series");
  for (const auto& s : series)
    if (static_cast<int>(s.size()) <= lag + 2)
      throw EmptyInput("pearson_over_slots: series shorter than lag+3");

  if (pooling == Pooling::RawAcrossLinks) {
    PairMoments m;
    for (const auto& s : series)
      for (size_t t = lag; t < s.size(); ++t) m.add(s[t - lag], s[t]);
    const double rho = pearson_of(m);
    return CorrEstimate{rho, fisher_std_error(rho, m.n)};
  }

  std::vector<double> per_link;
  per_link.reserve(series.size());
  double pairs_per_link = 0.0;
  for (const auto& s : series) {
    PairMoments m;
    for (size_t t = lag; t < s.size(); ++t) m.add(s[t - lag], s[t]);
    pairs_per_link = m.n;
    per_link.push_back(pearson_of(m));
  }
  if (per_link.size() == 1)
    return CorrEstimate{per_link[0], fisher_std_error(per_link[0], pairs_per_link)};
  const MeanStd ms = mean_std(per_link);
  return CorrEstimate{ms.mean, ms.std_dev / std::sqrt(static_cast<double>(per_link.size()))};
}

CorrEstimate across_realizations(std::span<const double> per_realization_estimates) {
  if (per_realization_estimates.size() < 2)
    throw EmptyInput("across_realizations: need at least two realizations");
  std::vector<double> vals(per_realization_estimates.begin(), per_realization_estimates.end());
  const MeanStd ms = mean_std(vals);
  return CorrEstimate{ms.mean, ms.std_dev / std::sqrt(static_cast<double>(vals.size()))};
}

namespace {

PairMoments merge_moments(std::span<const PairMoments> parts) {
  PairMoments out;
  for (const auto& m : parts) {
    out.n += m.n;
    out.sx += m.sx;
    out.sy += m.sy;
    out.sxx += m.sxx;
    out.syy += m.syy;
    out.sxy += m.sxy;
  }
  return out;
}

PairMoments subtract_moments(PairMoments a, const PairMoments& b) {
  a.n -= b.n;
  a.sx -= b.sx;
  a.sy -= b.sy;
  a.sxx -= b.sxx;
  a.syy -= b.syy;
  a.sxy -= b.sxy;
  return a;
}

}  // namespace

CorrEstimate pearson_jackknife(std::span<const PairMoments> per_realization) {
  if (per_realization.empty()) throw EmptyInput("pearson_jackknife: no moments");
  const PairMoments merged = merge_moments(per_realization);
  const double theta = pearson_of(merged);
  const size_t r = per_realization.size();
  if (r < 2) return CorrEstimate{theta, fisher_std_error(theta, merged.n)};

  std::vector<double> loo;
  loo.reserve(r);
  for (const auto& m : per_realization) {
    try {
      loo.push_back(pearson_of(subtract_moments(merged, m)));
    } catch (const DegenerateVariance&) {
    }
  }
  if (loo.size() < 2) return CorrEstimate{theta, fisher_std_error(theta, merged.n)};
  double mean = 0.0;
  for (double v : loo) mean += v;
  mean /= static_cast<double>(loo.size());
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  const double k = static_cast<double>(loo.size());
  return CorrEstimate{theta, std::sqrt((k - 1.0) / k * ss)};
}

SimEstimates aggregate(std::span<const RealizationRecord> records, Traffic mode) {
  if (records.empty()) throw EmptyInput("aggregate: no records");
  SimEstimates out;

  if (mode == Traffic::Backlogged) {
    out.nonempty_prob = MeanStd{1.0, 0.0}; // every queue is nonempty by definition

    std::vector<double> success;
    std::vector<PairMoments> interf_moments, success_moments;
    int64_t joint_pairs = 0, joint_successes = 0;
    for (const auto& rec : records) {
      if (rec.attempts > 0)
        success.push_back(static_cast<double>(rec.successes) /
                          static_cast<double>(rec.attempts));
      joint_pairs += rec.joint_pairs;
      joint_successes += rec.joint_successes;
      if (rec.interference_pairs.n > 0) interf_moments.push_back(rec.interference_pairs);
      if (rec.success_pairs.n > 0) success_moments.push_back(rec.success_pairs);
    }
    out.success_prob = mean_std(success);
    if (!interf_moments.empty()) {
      try {
        out.interference_corr = pearson_jackknife(interf_moments);
      } catch (const DegenerateVariance&) {
      }
    }
    if (!success_moments.empty()) {
      try {
        out.success_corr = pearson_jackknife(success_moments);
      } catch (const DegenerateVariance&) {
      }
    }
    if (joint_pairs > 0)
      out.joint_success_freq =
          static_cast<double>(joint_successes) / static_cast<double>(joint_pairs);
    return out;
  }

  out.nonempty_prob = estimate_nonempty(records);
  std::vector<double> success;
  int64_t arrivals = 0, stranded = 0;
  for (const auto& rec : records) {
    if (rec.attempts > 0)
      success.push_back(static_cast<double>(rec.successes) /
                        static_cast<double>(rec.attempts));
    arrivals += rec.arrivals;
    stranded += rec.stranded;
  }
  out.success_prob = mean_std(success);
  try {
    out.mean_delay = estimate_delay(records);
  } catch (const NoDeliveredPackets&) {
    out.mean_delay = std::nullopt;
  }
  if (arrivals > 0)
    out.stranded_fraction = static_cast<double>(stranded) / static_cast<double>(arrivals);
  return out;
}

}  // namespace msa
