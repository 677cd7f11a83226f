#include "saleval/harness/protocol.hpp"

#include "saleval/fixation_metrics.hpp"
#include "saleval/io.hpp"
#include "saleval/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace saleval {

void EvaluationConfig::validate() const {
  plan.validate();
  if (histogram.bins < 2) throw std::invalid_argument("config: bins must be >= 2");
  if (!(histogram.epsilon > 0)) throw std::invalid_argument("config: epsilon must be > 0");
  histogram.ground.validate();
  if (blur_sweep.empty() || std::find(blur_sweep.begin(), blur_sweep.end(), 0.0) == blur_sweep.end())
    throw std::invalid_argument("config: blur sweep must contain 0");
  for (double s : blur_sweep)
    if (!(s >= 0)) throw std::invalid_argument("config: blur sweep values must be >= 0");
  if (metrics.empty()) throw std::invalid_argument("config: no metrics selected");
  if (sim_bins < 2) throw std::invalid_argument("config: sim bins must be >= 2");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
}

bool record_less(const EvaluationRecord& a, const EvaluationRecord& b) {
  return std::tie(a.model_id, a.image_id, a.metric_id) < std::tie(b.model_id, b.image_id, b.metric_id);
}

namespace {

std::vector<double> ascending_sweep(std::span<const double> sweep) {
  if (sweep.empty() || std::find(sweep.begin(), sweep.end(), 0.0) == sweep.end())
    throw std::invalid_argument("optimal_blur_search: sweep must be non-empty and contain 0");
  std::vector<double> sorted(sweep.begin(), sweep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return sorted;
}

SaliencyMap blur_candidate(const SaliencyMap& s, double sigma) { return normalize_map(gaussian_blur(s, sigma)); }

}  // namespace

BlurSearchResult optimal_blur_search(const SaliencyMap& s, const Scorer& scorer, std::span<const double> sweep) {
  BlurSearchResult best;
  for (double sigma : ascending_sweep(sweep)) {
    try {
      const double v = scorer(blur_candidate(s, sigma));
      if (!best.score || v > *best.score) best = {v, sigma};
    } catch (const DegenerateInput&) {
    }
  }
  return best;
}

double score_metric(Metric metric, const SaliencyMap& candidate, const FixationSet& fix, const ShuffleBank& bank,
                    const FixationDensityMap* density, const EvaluationConfig& cfg) {
  const auto need_density = [&]() -> const SaliencyMap& {
    if (!density) throw std::invalid_argument(std::string(metric_name(metric)) + ": needs a ground-truth density map");
    return density->map;
  };
  switch (metric) {
    case Metric::sauc: return sauc(candidate, fix, bank, cfg.plan).value;
    case Metric::snss: return snss(candidate, fix, bank, cfg.plan).value;
    case Metric::sskld: return sskld(candidate, fix, bank, cfg.plan, cfg.histogram).value;
    case Metric::sjsd: return sjsd(candidate, fix, bank, cfg.plan, cfg.histogram).value;
    case Metric::semd: return semd(candidate, fix, bank, cfg.plan, cfg.histogram).value;
    case Metric::skld: return skld(candidate, fix, bank, cfg.plan, cfg.histogram).value;
    case Metric::cc: return cc(candidate, need_density());
    case Metric::sim: return sim(candidate, need_density(), cfg.sim_bins);
    case Metric::nss: return nss(candidate, fix);
    case Metric::auc_f: return auc_f(candidate, fix, cfg.plan).value;
    case Metric::auc_s: return auc_s(candidate, need_density());
  }
  throw std::invalid_argument("score_metric: unknown metric");
}

std::vector<EvaluationRecord> evaluate_pair(const SaliencyMap& s_raw, const ImageEntry& image, const FixationSet& fix,
                                            const FixationDensityMap& g, const ShuffleBank& bank,
                                            const EvaluationConfig& cfg, const std::string& model_id,
                                            std::vector<std::string>* errors) {
  const auto sweep = ascending_sweep(cfg.blur_sweep);
  const SaliencyMap prepared = normalize_map(resize_map(s_raw, image.width, image.height));

  std::vector<BlurSearchResult> best(cfg.metrics.size());
  // Every metric is maximized independently; candidates are shared across
  // metrics so each blur level is computed once.
  for (double sigma : sweep) {
    const SaliencyMap candidate = blur_candidate(prepared, sigma);
    for (std::size_t k = 0; k < cfg.metrics.size(); ++k) {
      try {
        const double v = score_metric(cfg.metrics[k], candidate, fix, bank, &g, cfg);
        if (!best[k].score || v > *best[k].score) best[k] = {v, sigma};
      } catch (const DegenerateInput&) {
      } catch (const std::exception& e) {
        if (errors)
          errors->push_back(model_id + "/" + image.image_id + "/" + std::string(metric_name(cfg.metrics[k])) +
                            ": " + e.what());
      }
    }
  }

  std::vector<EvaluationRecord> out;
  out.reserve(cfg.metrics.size());
  for (std::size_t k = 0; k < cfg.metrics.size(); ++k) {
    const std::string metric_id(metric_name(cfg.metrics[k]));
    out.push_back({model_id, image.image_id, metric_id, best[k].score, best[k].score ? best[k].sigma : 0.0,
                   image.distortion_type, image.distortion_level, image.complexity,
                   cfg.plan.digest(image.image_id, metric_id)});
  }
  return out;
}

BatchResult evaluate_dataset(const DatasetManifest& manifest, const EvaluationConfig& cfg) {
  cfg.validate();
  std::vector<FixationSet> fixations;
  fixations.reserve(manifest.images.size());
  for (const ImageEntry& im : manifest.images) fixations.push_back(im.fixations);
  const ShuffleBank bank = build_shuffle_bank(fixations, manifest.shuffle_frame());

  const bool wants_density = std::any_of(cfg.metrics.begin(), cfg.metrics.end(), [](Metric m) {
    return m == Metric::cc || m == Metric::sim || m == Metric::auc_s;
  });
  std::vector<FixationDensityMap> densities(manifest.images.size());
  if (wants_density) {
    for (std::size_t i = 0; i < manifest.images.size(); ++i) {
      const ImageEntry& im = manifest.images[i];
      if (im.density_file) {
        SaliencyMap loaded = read_pgm(manifest.resolve(*im.density_file));
        densities[i] = {resize_map(loaded, im.width, im.height), manifest.fwhm_px()};
      } else {
        densities[i] = density_from_fixations(im.fixations, manifest.fwhm_px());
      }
    }
  }

  struct Unit {
    std::size_t model;
    std::size_t image;
  };
  std::vector<Unit> units;
  for (std::size_t m = 0; m < manifest.models.size(); ++m)
    for (std::size_t i = 0; i < manifest.images.size(); ++i) units.push_back({m, i});

  BatchResult result;
  std::mutex sink;
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t u = next.fetch_add(1);
      if (u >= units.size()) return;
      const ModelEntry& model = manifest.models[units[u].model];
      const ImageEntry& im = manifest.images[units[u].image];
      std::vector<std::string> errors;
      std::vector<EvaluationRecord> records;
      try {
        const SaliencyMap s = read_pgm(manifest.resolve(model.maps.at(im.image_id)));
        records = evaluate_pair(s, im, im.fixations, densities[units[u].image], bank, cfg, model.model_id, &errors);
      } catch (const std::exception& e) {
        errors.push_back(model.model_id + "/" + im.image_id + ": " + e.what());
        for (Metric m : cfg.metrics) {
          const std::string metric_id(metric_name(m));
          records.push_back({model.model_id, im.image_id, metric_id, std::nullopt, 0.0, im.distortion_type,
                             im.distortion_level, im.complexity, cfg.plan.digest(im.image_id, metric_id)});
        }
      }
      const std::lock_guard lock(sink);
      result.records.insert(result.records.end(), records.begin(), records.end());
      result.errors.insert(result.errors.end(), errors.begin(), errors.end());
    }
  };

  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), std::max<std::size_t>(units.size(), 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::sort(result.records.begin(), result.records.end(), record_less);
  std::sort(result.errors.begin(), result.errors.end());
  result.missing = static_cast<std::size_t>(
      std::count_if(result.records.begin(), result.records.end(), [](const EvaluationRecord& r) { return !r.score; }));
  return result;
}

}  // namespace saleval
