#pragma once

// Seeded negative-point sampling: uniform non-fixated pixels (AUC-F) and
// cross-image "shuffled" fixations for the center-bias-corrected metrics.

#include "saleval/rng.hpp"
#include "saleval/types.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace saleval {

/// Proportional coordinate mapping floor(x * W' / W), floor(y * H' / H).
Point rescale_point(Point p, Frame from, Frame to);

/// Pooled fixations of every image of a dataset, expressed in one common frame.
class ShuffleBank {
 public:
  struct Entry {
    std::string image_id;
    std::size_t offset = 0;  // into pooled()
    std::size_t count = 0;
  };

  ShuffleBank(const std::vector<FixationSet>& dataset, Frame frame);

  Frame frame() const { return frame_; }
  std::size_t image_count() const { return entries_.size(); }
  std::size_t total_points() const { return pooled_.size(); }
  const std::vector<Point>& pooled() const { return pooled_; }
  const std::vector<Entry>& entries() const { return entries_; }
  /// Fixations of one image in the bank frame; throws std::out_of_range for an unknown id.
  std::span<const Point> fixations_of(std::string_view image_id) const;
  bool contains(std::string_view image_id) const;

 private:
  Frame frame_;
  std::vector<Point> pooled_;
  std::vector<Entry> entries_;  // sorted by image_id
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Builds a bank from at least two non-empty fixation sets. Sets whose frame
/// differs from `frame` are rescaled proportionally.
ShuffleBank build_shuffle_bank(const std::vector<FixationSet>& dataset, Frame frame);

struct TrialPlan {
  int num_trials = 100;
  /// 0 means "match the test image's fixation count N".
  int samples_per_trial = 0;
  std::uint64_t master_seed = 0;

  std::uint64_t seed_for(std::string_view image_id, std::string_view metric_id, int trial) const {
    return derive_seed(master_seed, image_id, metric_id, static_cast<std::uint64_t>(trial));
  }
  int samples_for(std::size_t fixation_count) const {
    return samples_per_trial > 0 ? samples_per_trial : static_cast<int>(fixation_count);
  }
  void validate() const;
  /// Stable 64-bit digest of the plan as applied to one (image, metric) pair.
  std::uint64_t digest(std::string_view image_id, std::string_view metric_id) const;
};

struct NegativeSample {
  std::vector<Point> points;
  int trial_index = 0;
};

/// n distinct pixels of the fixation frame, none of them a fixated pixel,
/// uniform over the eligible pixels.
NegativeSample sample_uniform_nonfixated(const FixationSet& fixations, int n, std::uint64_t seed, int trial_index = 0);

/// n points drawn uniformly with replacement from the pooled fixations of every
/// bank image except `exclude`. Points are in the bank frame.
NegativeSample sample_shuffled_nonfixated(const ShuffleBank& bank, std::string_view exclude, int n, std::uint64_t seed,
                                          int trial_index = 0);

}  // namespace saleval
