#include "saleval/histogram_metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace saleval {

namespace {

struct TrialContext {
  const SaliencyMap& s;
  const FixationSet& fix;
  const ShuffleBank& bank;
  const TrialPlan& plan;
  std::vector<Point> positives;  // map frame
  double pos_mean = 0.0;
  double map_mean = 0.0;
  double map_std = 0.0;

  TrialContext(const SaliencyMap& s_, const FixationSet& fix_, const ShuffleBank& bank_, const TrialPlan& plan_,
               const char* metric)
      : s(s_), fix(fix_), bank(bank_), plan(plan_) {
    plan.validate();
    if (fix.points.empty())
      throw std::invalid_argument(std::string(metric) + ": image '" + fix.image_id + "' has no fixations");
    fix.validate();
    map_mean = s.mean();
    map_std = s.stddev();
    if (!(map_std > 1e-12 * std::max(1.0, s.max())))
      throw DegenerateInput(std::string(metric) + ": predicted map has zero variance");
    positives.reserve(fix.points.size());
    for (const Point& p : fix.points) {
      positives.push_back(rescale_point(p, fix.frame, s.frame()));
      pos_mean += s.at(positives.back());
    }
    pos_mean /= static_cast<double>(positives.size());
  }

  HistogramTrial trial(Metric seed_metric, int l, int bins) const {
    const int n = plan.samples_for(fix.points.size());
    const auto neg = sample_shuffled_nonfixated(bank, fix.image_id, n, plan.seed_for(fix.image_id, metric_name(seed_metric), l), l);
    std::vector<Point> negatives;
    negatives.reserve(neg.points.size());
    double neg_mean = 0.0;
    for (const Point& p : neg.points) {
      negatives.push_back(rescale_point(p, bank.frame(), s.frame()));
      neg_mean += s.at(negatives.back());
    }
    neg_mean /= static_cast<double>(negatives.size());
    const auto norm = static_cast<double>(fix.points.size());
    return {hist_at_points(s, positives, bins, norm), hist_at_points(s, negatives, bins, norm),
            (pos_mean - neg_mean) / map_std};
  }
};

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

MetricScore finish(Metric m, double sum, int trials) {
  return {sum / trials, std::string(metric_name(m)), trials, 0.0};
}

}  // namespace

HistogramTrial histogram_trial(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank,
                               const TrialPlan& plan, Metric metric, int trial, int bins) {
  const TrialContext ctx(s, fix, bank, plan, "histogram_trial");
  return ctx.trial(metric, trial, bins);
}

MetricScore skld(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                 const HistogramOptions& opt) {
  const TrialContext ctx(s, fix, bank, plan, "skld");
  double sum = 0.0;
  for (int l = 0; l < plan.num_trials; ++l) {
    const HistogramTrial t = ctx.trial(Metric::sskld, l, opt.bins);
    sum += symmetric_kld(t.fixated, t.shuffled, opt.epsilon);
  }
  return finish(Metric::skld, sum, plan.num_trials);
}

MetricScore sskld(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                  const HistogramOptions& opt) {
  const TrialContext ctx(s, fix, bank, plan, "sskld");
  double signed_sum = 0.0;
  double kld_sum = 0.0;
  double snss_sum = 0.0;
  for (int l = 0; l < plan.num_trials; ++l) {
    const HistogramTrial t = ctx.trial(Metric::sskld, l, opt.bins);
    const double kld = symmetric_kld(t.fixated, t.shuffled, opt.epsilon);
    signed_sum += sign_of(t.snss) * kld;
    kld_sum += kld;
    snss_sum += t.snss;
  }
  if (opt.sign_mode == SignMode::aggregate) return finish(Metric::sskld, sign_of(snss_sum) * kld_sum, plan.num_trials);
  return finish(Metric::sskld, signed_sum, plan.num_trials);
}

MetricScore sjsd(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                 const HistogramOptions& opt) {
  const TrialContext ctx(s, fix, bank, plan, "sjsd");
  double sum = 0.0;
  for (int l = 0; l < plan.num_trials; ++l) {
    const HistogramTrial t = ctx.trial(Metric::sjsd, l, opt.bins);
    sum += std::sqrt(jsd(t.fixated, t.shuffled));
  }
  return finish(Metric::sjsd, sum, plan.num_trials);
}

MetricScore semd(const SaliencyMap& s, const FixationSet& fix, const ShuffleBank& bank, const TrialPlan& plan,
                 const HistogramOptions& opt) {
  opt.ground.validate();
  const TrialContext ctx(s, fix, bank, plan, "semd");
  double sum = 0.0;
  for (int l = 0; l < plan.num_trials; ++l) {
    const HistogramTrial t = ctx.trial(Metric::semd, l, opt.bins);
    sum += emd_hat(t.fixated, t.shuffled, opt.ground);
  }
  return finish(Metric::semd, sum, plan.num_trials);
}

double emd_hat_maps(const SaliencyMap& s, const SaliencyMap& g, const HistogramOptions& opt) {
  if (s.frame() != g.frame()) throw std::invalid_argument("emd_hat_maps: map dimensions differ");
  const auto flat = [](const SaliencyMap& m) {
    return std::span<const double>(m.values().data(), static_cast<std::size_t>(m.values().size()));
  };
  return emd_hat(histogram_of(flat(s), opt.bins), histogram_of(flat(g), opt.bins), opt.ground);
}

}  // namespace saleval
