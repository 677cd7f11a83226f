#include "saleval/shuffler.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace saleval {

namespace {

std::int64_t pixel_index(Point p, Frame f) { return std::int64_t{p.y} * f.width + p.x; }

}  // namespace

Point rescale_point(Point p, Frame from, Frame to) {
  if (from == to) return p;
  const auto x = static_cast<int>(std::int64_t{p.x} * to.width / from.width);
  const auto y = static_cast<int>(std::int64_t{p.y} * to.height / from.height);
  return {std::min(x, to.width - 1), std::min(y, to.height - 1)};
}

ShuffleBank::ShuffleBank(const std::vector<FixationSet>& dataset, Frame frame) : frame_(frame) {
  if (frame.width < 1 || frame.height < 1) throw std::invalid_argument("shuffle bank: empty frame");
  if (dataset.size() < 2) throw std::invalid_argument("shuffle bank: need at least 2 images");

  std::vector<const FixationSet*> sorted;
  sorted.reserve(dataset.size());
  for (const FixationSet& fs : dataset) sorted.push_back(&fs);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->image_id < b->image_id; });

  for (const FixationSet* fs : sorted) {
    if (fs->points.empty()) throw std::invalid_argument("shuffle bank: image '" + fs->image_id + "' has no fixations");
    fs->validate();
    if (index_.contains(fs->image_id))
      throw std::invalid_argument("shuffle bank: duplicate image id '" + fs->image_id + "'");
    Entry e{fs->image_id, pooled_.size(), fs->points.size()};
    for (const Point& p : fs->points) pooled_.push_back(rescale_point(p, fs->frame, frame_));
    index_.emplace(fs->image_id, entries_.size());
    entries_.push_back(std::move(e));
  }
}

std::span<const Point> ShuffleBank::fixations_of(std::string_view image_id) const {
  const auto it = index_.find(image_id);
  if (it == index_.end()) throw std::out_of_range("shuffle bank: unknown image '" + std::string(image_id) + "'");
  const Entry& e = entries_[it->second];
  return {pooled_.data() + e.offset, e.count};
}

bool ShuffleBank::contains(std::string_view image_id) const { return index_.find(image_id) != index_.end(); }

ShuffleBank build_shuffle_bank(const std::vector<FixationSet>& dataset, Frame frame) {
  return ShuffleBank(dataset, frame);
}

void TrialPlan::validate() const {
  if (num_trials < 1) throw std::invalid_argument("trial plan: num_trials must be >= 1");
  if (samples_per_trial < 0) throw std::invalid_argument("trial plan: samples_per_trial must be >= 0");
}

std::uint64_t TrialPlan::digest(std::string_view image_id, std::string_view metric_id) const {
  std::uint64_t h = derive_seed(master_seed, image_id, metric_id, 0);
  h = mix64(h ^ static_cast<std::uint64_t>(num_trials));
  return mix64(h ^ static_cast<std::uint64_t>(samples_per_trial));
}

NegativeSample sample_uniform_nonfixated(const FixationSet& fixations, int n, std::uint64_t seed, int trial_index) {
  fixations.validate();
  if (n < 0) throw std::invalid_argument("sample_uniform_nonfixated: n must be >= 0");
  const Frame f = fixations.frame;
  std::unordered_set<std::int64_t> fixated;
  for (const Point& p : fixations.points) fixated.insert(pixel_index(p, f));
  const std::int64_t eligible = f.area() - static_cast<std::int64_t>(fixated.size());
  if (n > eligible)
    throw std::invalid_argument("sample_uniform_nonfixated: requested " + std::to_string(n) +
                                " points but only " + std::to_string(eligible) + " non-fixated pixels in '" +
                                fixations.image_id + "'");

  Rng rng(seed);
  NegativeSample out;
  out.trial_index = trial_index;
  out.points.reserve(static_cast<std::size_t>(n));
  const auto to_point = [&](std::int64_t idx) { return Point{static_cast<int>(idx % f.width), static_cast<int>(idx / f.width)}; };

  if (2 * std::int64_t{n} <= eligible) {
    // Sparse request: rejection sampling over the whole frame.
    std::unordered_set<std::int64_t> taken;
    while (static_cast<int>(out.points.size()) < n) {
      const auto idx = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(f.area())));
      if (fixated.contains(idx) || !taken.insert(idx).second) continue;
      out.points.push_back(to_point(idx));
    }
  } else {
    // Dense request: partial Fisher-Yates over the explicit eligible list.
    std::vector<std::int64_t> pool;
    pool.reserve(static_cast<std::size_t>(eligible));
    for (std::int64_t idx = 0; idx < f.area(); ++idx)
      if (!fixated.contains(idx)) pool.push_back(idx);
    for (int i = 0; i < n; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      out.points.push_back(to_point(pool[static_cast<std::size_t>(i)]));
    }
  }
  return out;
}

NegativeSample sample_shuffled_nonfixated(const ShuffleBank& bank, std::string_view exclude, int n, std::uint64_t seed,
                                          int trial_index) {
  if (n < 0) throw std::invalid_argument("sample_shuffled_nonfixated: n must be >= 0");
  std::size_t skip_offset = bank.total_points();
  std::size_t skip_count = 0;
  if (bank.contains(exclude)) {
    const auto own = bank.fixations_of(exclude);
    skip_offset = static_cast<std::size_t>(own.data() - bank.pooled().data());
    skip_count = own.size();
  }
  const std::size_t available = bank.total_points() - skip_count;
  if (available == 0)
    throw std::invalid_argument("sample_shuffled_nonfixated: excluding '" + std::string(exclude) +
                                "' leaves no fixations in the bank");

  Rng rng(seed);
  NegativeSample out;
  out.trial_index = trial_index;
  out.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto r = static_cast<std::size_t>(rng.below(available));
    if (r >= skip_offset) r += skip_count;
    out.points.push_back(bank.pooled()[r]);
  }
  return out;
}

}  // namespace saleval
