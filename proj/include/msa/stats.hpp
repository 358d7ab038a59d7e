#pragma once

#include <optional>
#include <span>
#include <vector>

#include "msa/sim_engine.hpp"

namespace msa {

struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0; // across-realization sample standard deviation
};

struct CorrEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// RawAcrossLinks pools the raw (x_t, x_{t+lag}) samples of every link into
// one Pearson coefficient. In a static network this is what recovers the
// ensemble correlation: given fixed positions the slots are independent, so
// the correlation carried by the common topology lives entirely in the
// cross-link variation, and standardizing each link away would erase it.
// PerLinkAverage (one coefficient per link, then averaged) is kept for
// inspecting exactly that conditional-on-topology correlation.
enum class Pooling { RawAcrossLinks, PerLinkAverage };

// Estimators over the per-realization simulation records. Probability
// estimates are means with across-realization standard deviations (matching
// the error bars convention); correlation estimates carry standard errors.
struct SimEstimates {
  MeanStd nonempty_prob;
  MeanStd success_prob;
  std::optional<MeanStd> mean_delay;               // absent when nothing was delivered
  std::optional<CorrEstimate> interference_corr;   // backlogged runs only
  std::optional<CorrEstimate> success_corr;        // backlogged runs only
  std::optional<double> joint_success_freq;        // backlogged runs only
  double stranded_fraction = 0.0;
};

// Fraction of (interior link, slot) pairs with a nonempty queue, per
// realization, then mean/std across realizations. Throws EmptyInput.
MeanStd estimate_nonempty(std::span<const RealizationRecord> records);

// Mean delay over delivered interior packets per realization, then mean/std
// across realizations. Throws NoDeliveredPackets when no realization
// delivered anything.
MeanStd estimate_delay(std::span<const RealizationRecord> records);

// Pearson correlation of a per-link series against itself lag slots later.
// Standard error via the Fisher transform for pooled samples, or the
// across-link spread under PerLinkAverage. Throws EmptyInput when any series
// is shorter than lag+3, DegenerateVariance when a pooled series is constant.
CorrEstimate pearson_over_slots(const std::vector<std::vector<double>>& series, int lag,
                                Pooling pooling = Pooling::RawAcrossLinks);

// Pearson coefficient from accumulated pair moments. Throws DegenerateVariance.
double pearson_of(const PairMoments& moments);

// Mean and std-error-of-the-mean over per-realization estimates; the
// dependence-robust way to attach an error bar to a Monte Carlo correlation.
// Requires at least two values.
CorrEstimate across_realizations(std::span<const double> per_realization_estimates);

// Pearson over the pair moments of all realizations merged, with a
// delete-one-realization jackknife standard error. Merging first matters: a
// per-realization coefficient re-centers on that topology's own mean, which
// eats the cross-topology variance the ensemble correlation is made of.
CorrEstimate pearson_jackknife(std::span<const PairMoments> per_realization);

SimEstimates aggregate(std::span<const RealizationRecord> records, Traffic mode);

}  // namespace msa
