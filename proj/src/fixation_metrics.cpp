#include "saleval/fixation_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace saleval {

namespace {

// Relative floor below which a map's spread is treated as zero.
constexpr double kFlatTolerance = 1e-12;

struct MapStats {
  double mean;
  double stddev;
};

MapStats checked_stats(const SaliencyMap& s, const char* metric) {
  const MapStats st{s.mean(), s.stddev()};
  if (!(st.stddev > kFlatTolerance * std::max(1.0, s.max())))
    throw DegenerateInput(std::string(metric) + ": predicted map has zero variance");
  return st;
}

/// For each value, the number of grid thresholds (counted from the top) at
/// which it is salient: value v is salient at t_k = k / (levels - 1) iff v >= t_k.
int highest_level_reached(double v, int levels) {
  const int top = levels - 1;
  int k = static_cast<int>(std::floor(v * top));
  k = std::clamp(k, -1, top);
  while (k < top && v >= static_cast<double>(k + 1) / top) ++k;
  while (k >= 0 && v < static_cast<double>(k) / top) --k;
  return k;  // -1: never salient (only possible for v < 0)
}

/// Cumulative counts: out[i] = number of values salient at threshold index i,
/// thresholds ordered descending.
std::vector<double> salient_fractions(std::span<const double> values, int levels) {
  std::vector<double> count(static_cast<std::size_t>(levels), 0.0);
  for (double v : values) {
    const int k = highest_level_reached(v, levels);
    if (k >= 0) count[static_cast<std::size_t>(levels - 1 - k)] += 1.0;
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  for (double& c : count) c /= static_cast<double>(values.size());
  return count;
}

std::vector<double> descending_thresholds(int levels) {
  std::vector<double> t(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(levels - 1 - i) / (levels - 1);
  return t;
}

std::vector<Point> to_map_frame(const SaliencyMap& s, const FixationSet& fix) {
  std::vector<Point> pts;
  pts.reserve(fix.points.size());
  for (const Point& p : fix.points) pts.push_back(rescale_point(p, fix.frame, s.frame()));
  return pts;
}

void require_fixations(const FixationSet& fix, const char* metric) {
  if (fix.points.empty())
    throw std::invalid_argument(std::string(metric) + ": image '" + fix.image_id + "' has no fixations");
  fix.validate();
}

void require_same_frame(const SaliencyMap& a, const SaliencyMap& b, const char* metric) {
  if (a.frame() != b.frame()) throw std::invalid_argument(std::string(metric) + ": map dimensions differ");
}

template <typename TrialFn>
MetricScore average_trials(Metric metric, const TrialPlan& plan, TrialFn&& trial) {
  plan.validate();
  double sum = 0.0;
  for (int l = 0; l < plan.num_trials; ++l) sum += trial(l);
  return {sum / plan.num_trials, std::string(metric_name(metric)), plan.num_trials, 0.0};
}

}  // namespace

RocCurve roc_from_samples(std::span<const double> pos_values, std::span<const double> neg_values, int levels) {
  if (pos_values.empty() || neg_values.empty()) throw std::invalid_argument("roc_from_samples: empty sample list");
  if (levels < 2) throw std::invalid_argument("roc_from_samples: need at least 2 threshold levels");
  return {descending_thresholds(levels), salient_fractions(pos_values, levels), salient_fractions(neg_values, levels)};
}

double auc_of_curve(const RocCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.fpr.size() + 2);
  pts.emplace_back(0.0, 0.0);
  for (std::size_t i = 0; i < curve.fpr.size(); ++i) pts.emplace_back(curve.fpr[i], curve.tpr[i]);
  pts.emplace_back(1.0, 1.0);
  std::stable_sort(pts.begin(), pts.end());
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2.0;
  return std::clamp(area, 0.0, 1.0);
}

double auc_pair_oracle(std::span<const double> pos_values, std::span<const double> neg_values) {
  if (pos_values.empty() || neg_values.empty()) throw std::invalid_argument("auc_pair_oracle: empty sample list");
  double wins = 0.0;
  for (double p : pos_values)
    for (double n : neg_values) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return wins / (static_cast<double>(pos_values.size()) * static_cast<double>(neg_values.size()));
}

std::vector<double> values_at(const SaliencyMap& s, std::span<const Point> points, Frame frame) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& p : points) out.push_back(s.at(rescale_point(p, frame, s.frame())));
  return out;
}

double cc(const SaliencyMap& s, const SaliencyMap& g) {
  require_same_frame(s, g, "cc");
  const MapStats ss = checked_stats(s, "cc");
  const double sg = g.stddev();
  if (!(sg > kFlatTolerance * std::max(1.0, g.max()))) throw DegenerateInput("cc: ground-truth map has zero variance");
  const double cov = ((s.values() - ss.mean) * (g.values() - g.mean())).mean();
  return std::clamp(cov / (ss.stddev * sg), -1.0, 1.0);
}

double sim(const SaliencyMap& s, const SaliencyMap& g, int bins) {
  require_same_frame(s, g, "sim");
  if (bins < 2) throw std::invalid_argument("sim: bins must be >= 2");
  const auto histogram = [bins](const SaliencyMap& m) {
    Eigen::ArrayXd h = Eigen::ArrayXd::Zero(bins);
    const auto& v = m.values();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const int b = std::clamp(static_cast<int>(std::floor(v.data()[i] * bins)), 0, bins - 1);
      h(b) += 1.0;
    }
    return Eigen::ArrayXd(h / static_cast<double>(v.size()));
  };
  return histogram(s).min(histogram(g)).sum();
}

double nss(const SaliencyMap& s, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("nss: no fixation points");
  const MapStats st = checked_stats(s, "nss");
  double sum = 0.0;
  for (const Point& p : points) {
    if (!s.frame().contains(p)) throw std::invalid_argument("nss: point outside map frame");
    sum += s.at(p);
  }
  return (sum / static_cast<double>(points.size()) - st.mean) / st.stddev;
}

double nss(const SaliencyMap& s, const FixationSet& fix) {
  require_fixations(fix, "nss");
  return nss(s, to_map_frame(s, fix));
}

double snss_trial(const SaliencyMap& s, std::span<const Point> positives, std::span<const Point> negatives) {
  return nss(s, positives) - nss(s, negatives);
}

MetricScore snss(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan) {
  require_fixations(fix, "snss");
  const MapStats st = checked_stats(s, "snss");
  const auto positives = values_at(s, fix.points, fix.frame);
  const double pos_mean = std::accumulate(positives.begin(), positives.end(), 0.0) / static_cast<double>(positives.size());
  const int n = plan.samples_for(fix.points.size());
  return average_trials(Metric::snss, plan, [&](int l) {
    const auto neg = sample_shuffled_nonfixated(bank, fix.image_id, n, plan.seed_for(fix.image_id, "snss", l), l);
    const auto negatives = values_at(s, neg.points, bank.frame());
    const double neg_mean = std::accumulate(negatives.begin(), negatives.end(), 0.0) / static_cast<double>(negatives.size());
    return ((pos_mean - st.mean) - (neg_mean - st.mean)) / st.stddev;
  });
}

MetricScore auc_f(const SaliencyMap& s, const FixationSet& fix, const TrialPlan& plan) {
  require_fixations(fix, "auc_f");
  const auto positives = values_at(s, fix.points, fix.frame);
  const int n = plan.samples_for(fix.points.size());
  return average_trials(Metric::auc_f, plan, [&](int l) {
    const auto neg = sample_uniform_nonfixated(fix, n, plan.seed_for(fix.image_id, "auc_f", l), l);
    const auto negatives = values_at(s, neg.points, fix.frame);
    return auc_of_curve(roc_from_samples(positives, negatives));
  });
}

double auc_s(const SaliencyMap& s, const SaliencyMap& g) {
  require_same_frame(s, g, "auc_s");
  const double threshold = 0.5 * g.stddev();
  std::vector<double> inside, outside;
  const auto& sv = s.values();
  const auto& gv = g.values();
  for (Eigen::Index i = 0; i < gv.size(); ++i) (gv.data()[i] > threshold ? inside : outside).push_back(sv.data()[i]);
  if (inside.empty()) throw DegenerateInput("auc_s: no ground-truth pixel above threshold");
  if (outside.empty()) throw DegenerateInput("auc_s: every ground-truth pixel is above threshold");
  // TPR = n(S_t & G_T) / n(G_T); FPR = (n(S_t) - n(S_t & G_T)) / (l(G_T) - n(G_T)).
  return auc_of_curve(roc_from_samples(inside, outside));
}

MetricScore sauc(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan) {
  require_fixations(fix, "sauc");
  const auto positives = values_at(s, fix.points, fix.frame);
  const int n = plan.samples_for(fix.points.size());
  return average_trials(Metric::sauc, plan, [&](int l) {
    const auto neg = sample_shuffled_nonfixated(bank, fix.image_id, n, plan.seed_for(fix.image_id, "sauc", l), l);
    const auto negatives = values_at(s, neg.points, bank.frame());
    return auc_of_curve(roc_from_samples(positives, negatives));
  });
}

}  // namespace saleval
