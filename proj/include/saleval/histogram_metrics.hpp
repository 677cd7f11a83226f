#pragma once

// Shuffled histogram metrics. Each trial compares the histogram H of map
// values at the image's fixations with the histogram Hh at shuffled
// other-image fixations; both are divided by the image's fixation count.

#include "saleval/emd.hpp"
#include "saleval/fixation_metrics.hpp"
#include "saleval/histogram.hpp"
#include "saleval/shuffler.hpp"

namespace saleval {

enum class SignMode {
  per_trial,  // sign(SNSS) of each trial's own samples
  aggregate,  // sign(mean SNSS) times mean SKLD
};

struct HistogramOptions {
  int bins = 16;
  double epsilon = 1e-12;
  GroundDistanceSpec ground{5.0};
  SignMode sign_mode = SignMode::per_trial;
};

/// The (H, Hh) pair of one shuffled trial together with its SNSS.
struct HistogramTrial {
  ValueHistogram fixated;
  ValueHistogram shuffled;
  double snss = 0.0;
};

/// Builds the histograms for trial `trial` of `metric` on the image.
HistogramTrial histogram_trial(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank,
                               const TrialPlan& plan, Metric metric, int trial, int bins);

/// Unsigned shuffled symmetric KLD (the baseline that SSKLD signs). Draws
/// its negatives from the "sskld" seed stream, so |sskld| == skld whenever
/// every trial's SNSS has the same sign.
MetricScore skld(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                 const HistogramOptions& opt = {});

/// Signed shuffled KLD: sign(SNSS) times the symmetric KLD, per trial by
/// default (see SignMode). Throws DegenerateInput for a constant map.
MetricScore sskld(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                  const HistogramOptions& opt = {});

/// Shuffled Jensen-Shannon distance: mean over trials of sqrt(JSD(H, Hh)).
MetricScore sjsd(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                 const HistogramOptions& opt = {});

/// Shuffled EMD-hat between H and Hh; higher is better.
MetricScore semd(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                 const HistogramOptions& opt = {});

/// Raw EMD-hat between the intensity histograms of a predicted map and a
/// ground-truth map (lower is better). Not part of the blur-search surface.
double emd_hat_maps(const SaliencyMap& s, const SaliencyMap& g, const HistogramOptions& opt = {});

}  // namespace saleval
