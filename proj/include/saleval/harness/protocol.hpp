#pragma once

// Evaluation protocol: resize each predicted map to its image, normalize,
// then search a blur sweep independently for every metric and keep the best
// score.

#include "saleval/harness/manifest.hpp"
#include "saleval/histogram_metrics.hpp"
#include "saleval/metric_id.hpp"
#include "saleval/shuffler.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace saleval {

struct EvaluationConfig {
  TrialPlan plan{};
  HistogramOptions histogram{};
  std::vector<double> blur_sweep{0, 1, 2, 4, 8, 16, 24, 32};
  std::vector<Metric> metrics{kShuffledMetrics.begin(), kShuffledMetrics.end()};
  int sim_bins = 256;
  int jobs = 1;

  void validate() const;
};

struct EvaluationRecord {
  std::string model_id;
  std::string image_id;
  std::string metric_id;
  std::optional<double> score;
  double blur_sigma = 0.0;
  DistortionType distortion_type = DistortionType::none;
  DistortionLevel distortion_level = DistortionLevel::none;
  Complexity complexity = Complexity::unspecified;
  std::uint64_t trial_plan_digest = 0;

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

/// Orders records by (model, image, metric).
bool record_less(const EvaluationRecord& a, const EvaluationRecord& b);

struct BlurSearchResult {
  std::optional<double> score;
  double sigma = 0.0;
};

/// Scores a candidate map; throws DegenerateInput when undefined.
using Scorer = std::function<double(const SaliencyMap&)>;

/// Evaluates `scorer` on normalize_map(gaussian_blur(s, sigma)) for every sigma
/// in `sweep` (which must contain 0) and returns the highest score; the
/// smallest sigma wins ties. Missing when every candidate is degenerate.
BlurSearchResult optimal_blur_search(const SaliencyMap& s, const Scorer& scorer, std::span<const double> sweep);

/// Scores one metric on an already prepared candidate map.
double score_metric(Metric metric, const SaliencyMap& candidate, const FixationSet& fix, const ShuffleBank& bank,
                    const FixationDensityMap* density, const EvaluationConfig& cfg);

/// One record per configured metric for one (model, image) pair. Degenerate
/// metrics become missing scores; nothing here throws for a bad map.
std::vector<EvaluationRecord> evaluate_pair(const SaliencyMap& s_raw, const ImageEntry& image, const FixationSet& fix,
                                            const FixationDensityMap& g, const ShuffleBank& bank,
                                            const EvaluationConfig& cfg, const std::string& model_id,
                                            std::vector<std::string>* errors = nullptr);

struct BatchResult {
  std::vector<EvaluationRecord> records;  // sorted by record_less
  std::vector<std::string> errors;        // non-degenerate failures, sorted
  std::size_t missing = 0;
};

/// Evaluates every (model, image) pair of a loaded manifest, fanning out over
/// `cfg.jobs` workers. Output order does not depend on scheduling.
BatchResult evaluate_dataset(const DatasetManifest& manifest, const EvaluationConfig& cfg);

}  // namespace saleval
