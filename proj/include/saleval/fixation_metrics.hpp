#pragma once

// Metrics that compare a predicted map against fixation points or a
// ground-truth density map: CC, SIM, NSS/SNSS and the ROC family
// (AUC-F, AUC-S, SAUC).

#include "saleval/metric_id.hpp"
#include "saleval/shuffler.hpp"
#include "saleval/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace saleval {

inline constexpr int kThresholdLevels = 256;

/// ROC points for a descending threshold grid over [0, 1]. A value counts as
/// salient at threshold t when value >= t.
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> tpr;
  std::vector<double> fpr;
};

struct MetricScore {
  double value = 0.0;
  std::string metric_id;
  int trials_used = 1;
  double blur_sigma = 0.0;
};

RocCurve roc_from_samples(std::span<const double> pos_values, std::span<const double> neg_values,
                          int levels = kThresholdLevels);

/// Trapezoidal area over the fpr-sorted curve points plus (0,0) and (1,1).
double auc_of_curve(const RocCurve& curve);

/// Exact Mann-Whitney AUC: P(pos > neg) + P(pos == neg) / 2 over all pairs.
double auc_pair_oracle(std::span<const double> pos_values, std::span<const double> neg_values);

/// Map values sampled at points expressed in `frame`; points are rescaled
/// into the map frame when the two differ.
std::vector<double> values_at(const SaliencyMap& s, std::span<const Point> points, Frame frame);

/// Pearson correlation over all pixels. Throws DegenerateInput when either map
/// is constant.
double cc(const SaliencyMap& s, const SaliencyMap& g);

/// Histogram intersection of the mass-normalized intensity histograms of the
/// two maps (values binned over [0, 1]).
double sim(const SaliencyMap& s, const SaliencyMap& g, int bins = 256);

/// Mean standardized map value at the points. Throws DegenerateInput for a
/// constant map.
double nss(const SaliencyMap& s, std::span<const Point> points);
double nss(const SaliencyMap& s, const FixationSet& fix);

/// NSS at the positives minus NSS at the negatives, both in the map frame.
double snss_trial(const SaliencyMap& s, std::span<const Point> positives, std::span<const Point> negatives);

MetricScore snss(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan);

/// AUC with uniformly drawn non-fixated pixels as negatives, averaged over trials.
MetricScore auc_f(const SaliencyMap& s, const FixationSet& fix, const TrialPlan& plan);

/// AUC against the density map binarized at half its standard deviation.
/// Throws DegenerateInput when the binarization is empty or covers every pixel.
double auc_s(const SaliencyMap& s, const SaliencyMap& g);

/// AUC with shuffled other-image fixations as negatives, averaged over trials.
MetricScore sauc(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan);

}  // namespace saleval
