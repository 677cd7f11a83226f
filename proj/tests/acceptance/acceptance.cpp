// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include "cli.hpp"

#include "saleval/fixation_metrics.hpp"
#include "saleval/harness/protocol.hpp"
#include "saleval/harness/selfcheck.hpp"
#include "saleval/harness/stats.hpp"
#include "saleval/harness/synth.hpp"
#include "saleval/histogram.hpp"
#include "saleval/histogram_metrics.hpp"
#include "saleval/rng.hpp"
#include "saleval/transforms.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

using namespace saleval;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass;
  std::string detail;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("saleval_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

TrialPlan full_plan(std::uint64_t seed) {
  TrialPlan p;
  p.num_trials = 100;
  p.master_seed = seed;
  return p;
}

// Shared by criteria 3 and 4.
struct CenterBiased {
  SynthDataset data;
  ShuffleBank bank;
};

const CenterBiased& center_biased_dataset() {
  static const CenterBiased ds = [] {
    SynthSpec spec;
    spec.num_images = 60;
    spec.frame = {160, 120};
    spec.fixation_model = FixationModel::center_biased;
    spec.fixations_per_image = 30;
    spec.pixels_per_degree = 8;
    spec.seed = 2024;
    SynthDataset d = generate_synthetic(spec);
    ShuffleBank bank = build_shuffle_bank(d.fixation_sets(), spec.frame);
    return CenterBiased{std::move(d), std::move(bank)};
  }();
  return ds;
}

// 1 ---------------------------------------------------------------------------
Outcome auc_oracle() {
  const CheckResult r = check_auc_oracle(1, 1000);
  return {r.pass && r.seconds < 10.0, r.detail + ", " + num(r.seconds, 3) + " s (limit 10 s)"};
}

// 2 ---------------------------------------------------------------------------
Outcome emd_oracle() {
  const CheckResult r = check_emd_oracle(2, 1000);
  return {r.pass && r.seconds < 30.0, r.detail + ", " + num(r.seconds, 3) + " s (limit 30 s)"};
}

// 3 ---------------------------------------------------------------------------
Outcome center_bias_neutralization() {
  const CenterBiased& ds = center_biased_dataset();
  const TrialPlan plan = full_plan(3);
  const SaliencyMap center = centered_gaussian_baseline(160, 120, 0.25);
  double s_auc = 0, s_nss = 0, auc = 0;
  for (const SynthImage& im : ds.data.images) {
    s_auc += sauc(center, im.entry.fixations, ds.bank, plan).value;
    s_nss += snss(center, im.entry.fixations, ds.bank, plan).value;
    auc += auc_f(center, im.entry.fixations, plan).value;
  }
  const double n = static_cast<double>(ds.data.images.size());
  s_auc /= n;
  s_nss /= n;
  auc /= n;
  return {s_auc >= 0.45 && s_auc <= 0.55 && std::abs(s_nss) <= 0.1 && auc > 0.60,
          "60 images x 30 fixations: SAUC " + num(s_auc) + " (want [0.45, 0.55]), SNSS " + num(s_nss) +
              " (want |.| <= 0.1), AUC-F " + num(auc) + " (want > 0.60)"};
}

// 4 ---------------------------------------------------------------------------
Outcome inversion_penalty() {
  const CenterBiased& ds = center_biased_dataset();
  const TrialPlan plan = full_plan(4);
  int sign_ok = 0, magnitude_ok = 0;
  double min_gt = 1e300, max_inv = -1e300;
  for (const SynthImage& im : ds.data.images) {
    const SaliencyMap& g = im.density.map;
    const SaliencyMap inv = invert_map(g);
    const FixationSet& fix = im.entry.fixations;
    const double a = sskld(g, fix, ds.bank, plan).value;
    const double b = sskld(inv, fix, ds.bank, plan).value;
    sign_ok += (a > 0 && b < 0);
    magnitude_ok += (std::abs(a) == skld(g, fix, ds.bank, plan).value && std::abs(b) == skld(inv, fix, ds.bank, plan).value);
    min_gt = std::min(min_gt, a);
    max_inv = std::max(max_inv, b);
  }
  const int n = static_cast<int>(ds.data.images.size());
  return {sign_ok == n && magnitude_ok == n,
          "signs correct on " + std::to_string(sign_ok) + "/" + std::to_string(n) + " images (min SSKLD(gt) " +
              num(min_gt) + ", max SSKLD(inverted) " + num(max_inv) + "); |SSKLD| == SKLD exactly on " +
              std::to_string(magnitude_ok) + "/" + std::to_string(n)};
}

// 5 ---------------------------------------------------------------------------
Outcome false_positive_penalty() {
  SynthSpec spec;
  spec.num_images = 60;
  spec.frame = {160, 120};
  // Scattered, few fixations. Tight blobs push both maps' histograms apart
  // entirely and JSD saturates near 1 for A and B alike.
  spec.fixation_model = FixationModel::center_biased;
  spec.fixations_per_image = 12;
  spec.pixels_per_degree = 8;
  spec.seed = 55;
  spec.with_models = true;  // "background" = density map + U[0, 0.3 peak] per pixel
  const SynthDataset d = generate_synthetic(spec);
  const ShuffleBank bank = build_shuffle_bank(d.fixation_sets(), spec.frame);
  const TrialPlan plan = full_plan(5);
  int snss_wins = 0, sjsd_wins = 0, sauc_misranks = 0;
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    const FixationSet& fix = d.images[i].entry.fixations;
    const SaliencyMap& a = d.images[i].density.map;
    const SaliencyMap& b = d.models.at("background")[i];
    snss_wins += snss(a, fix, bank, plan).value > snss(b, fix, bank, plan).value;
    sjsd_wins += sjsd(a, fix, bank, plan).value > sjsd(b, fix, bank, plan).value;
    sauc_misranks += sauc(a, fix, bank, plan).value <= sauc(b, fix, bank, plan).value;
  }
  const int n = static_cast<int>(d.images.size());
  const int need = (9 * n + 9) / 10;
  return {snss_wins >= need && sjsd_wins >= need,
          "SNSS(A) > SNSS(B) on " + std::to_string(snss_wins) + "/" + std::to_string(n) + ", SJSD(A) > SJSD(B) on " +
              std::to_string(sjsd_wins) + "/" + std::to_string(n) + " (need " + std::to_string(need) +
              "); recorded: SAUC misranks on " + std::to_string(sauc_misranks) + "/" + std::to_string(n)};
}

// 6 ---------------------------------------------------------------------------
Outcome semd_center_bias_fix() {
  SynthSpec spec;
  spec.num_images = 54;
  spec.frame = {160, 120};
  spec.fixation_model = FixationModel::off_center_blobs;
  spec.fixations_per_image = 30;
  spec.pixels_per_degree = 8;
  spec.seed = 66;
  spec.distortion_layout = true;
  spec.with_models = true;
  const SynthDataset d = generate_synthetic(spec);
  const ShuffleBank bank = build_shuffle_bank(d.fixation_sets(), spec.frame);
  EvaluationConfig cfg;
  cfg.plan = full_plan(6);
  cfg.metrics = {Metric::semd};
  std::vector<EvaluationRecord> records;
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    const SynthImage& im = d.images[i];
    for (const char* model : {"ground_truth", "centered_gaussian"}) {
      auto r = evaluate_pair(d.models.at(model)[i], im.entry, im.entry.fixations, im.density, bank, cfg, model);
      records.insert(records.end(), r.begin(), r.end());
    }
  }
  std::map<std::string, std::map<std::string, double>> means;  // stratum -> model -> mean
  for (const AggregateRow& row : aggregate_scores(records, GroupBy::type_level).rows)
    means[row.stratum][row.model_id] = row.mean;
  int ok = 0;
  double worst_gap = 1e300;
  for (const auto& [stratum, m] : means) {
    const double gap = m.at("ground_truth") - m.at("centered_gaussian");
    ok += gap > 0;
    worst_gap = std::min(worst_gap, gap);
  }
  const int strata = static_cast<int>(means.size());
  return {strata == 9 && ok == strata, "SEMD(gt) > SEMD(centered) in " + std::to_string(ok) + "/" +
                                           std::to_string(strata) + " strata, smallest gap " + num(worst_gap)};
}

// 7 ---------------------------------------------------------------------------
Outcome metric_invariants() {
  std::vector<std::string> failures;
  const CenterBiased& ds = center_biased_dataset();
  const TrialPlan plan = full_plan(7);
  double worst_affine = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const SynthImage& im = ds.data.images[i];
    const SaliencyMap& s = im.density.map;
    const SaliencyMap g = normalize_map(gaussian_blur(s, 3.0));
    for (const auto& [a, b] : {std::pair{2.5, 0.1}, std::pair{0.01, 3.0}, std::pair{40.0, 0.0}}) {
      const SaliencyMap t(s.values() * a + b);
      worst_affine = std::max({worst_affine, std::abs(cc(t, g) - cc(s, g)),
                               std::abs(nss(t, im.entry.fixations) - nss(s, im.entry.fixations)),
                               std::abs(snss(t, im.entry.fixations, ds.bank, plan).value -
                                        snss(s, im.entry.fixations, ds.bank, plan).value)});
    }
  }
  if (worst_affine > 1e-9) failures.push_back("affine invariance " + num(worst_affine));

  const CheckResult j = check_jsd_definition(7, 10000);  // range, jsd(p,p), triangle over 10^4 triples
  if (!j.pass) failures.push_back(j.detail);

  const SaliencyMap flat = SaliencyMap::constant(160, 120, 0.42);
  bool flat_ok = true;
  for (std::size_t i = 0; i < 10; ++i) {
    const FixationSet& fix = ds.data.images[i].entry.fixations;
    flat_ok = flat_ok && sauc(flat, fix, ds.bank, plan).value == 0.5 && auc_f(flat, fix, plan).value == 0.5;
  }
  if (!flat_ok) failures.push_back("constant-map AUC != 0.5");

  std::string detail = "cc/nss/snss affine drift " + num(worst_affine, 3) + "; " + j.detail +
                       "; constant-map SAUC/AUC-F " + (flat_ok ? "exactly 0.5" : "NOT 0.5");
  return {failures.empty(), detail};
}

// 8 ---------------------------------------------------------------------------
Outcome protocol_determinism() {
  const fs::path dir = scratch("determinism");
  std::ostringstream out, err;
  const auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "saleval");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  if (run({"synth", "--out", (dir / "data").string(), "--images", "12", "--width", "128", "--height", "96",
           "--with-models", "--distortion-layout", "--seed", "8"}) != 0)
    return {false, "synth failed: " + err.str()};
  for (const char* r : {"run1", "run2"})
    if (run({"evaluate", "--manifest", (dir / "data" / "manifest.json").string(), "--out", (dir / r).string(),
             "--seed", "88", "--jobs", "2"}) != 0)
      return {false, std::string("evaluate failed: ") + err.str()};
  int identical = 0;
  for (const char* f : {"records.csv", "summary.json", "rankings.csv", "aggregates.csv"})
    identical += slurp(dir / "run1" / f) == slurp(dir / "run2" / f) && !slurp(dir / "run1" / f).empty();
  fs::remove_all(dir);
  return {identical == 4, std::to_string(identical) + "/4 report files byte-identical across two runs (12 images x 5 models)"};
}

// 9 ---------------------------------------------------------------------------
Outcome harness_statistics() {
  Eigen::MatrixXd same(4, 3), reversed(2, 3);
  same << 1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3;
  reversed << 1, 2, 3, 3, 2, 1;
  const double w_same = kendalls_w(same), w_rev = kendalls_w(reversed);

  std::vector<EvaluationRecord> rs;
  const DistortionType types[] = {DistortionType::blur, DistortionType::jpeg, DistortionType::noise};
  const DistortionLevel levels[] = {DistortionLevel::low, DistortionLevel::medium, DistortionLevel::high};
  Rng rng(9);
  int k = 0;
  for (const char* model : {"a", "b", "c"})
    for (DistortionType t : types)
      for (DistortionLevel l : levels)
        for (int rep = 0; rep < 2; ++rep, ++k)
          for (const char* metric : {"sauc", "snss", "sjsd"}) {
            EvaluationRecord r;
            r.model_id = model;
            r.image_id = "img" + std::to_string(k);
            r.metric_id = metric;
            r.score = rng.uniform(-1.0, 2.0);
            r.distortion_type = t;
            r.distortion_level = l;
            rs.push_back(r);
          }
  double drift = 0;
  for (StdAxis axis : {StdAxis::levels, StdAxis::types}) {
    const StdTable base = normalized_std_table(rs, axis);
    auto scaled = rs;
    for (auto& r : scaled)
      if (r.metric_id == "snss") *r.score *= 10;
    drift = std::max(drift, (normalized_std_table(scaled, axis).values - base.values).cwiseAbs().maxCoeff());
  }
  return {w_same == 1.0 && w_rev == 0.0 && drift <= 1e-12,
          "W(identical) = " + num(w_same, 17) + ", W(reversed, n=3) = " + num(w_rev, 17) +
              ", std-table drift under x10 scaling " + num(drift, 3)};
}

// 10 --------------------------------------------------------------------------
Outcome throughput() {
  SynthSpec spec;
  spec.num_images = 54;
  spec.frame = {768, 512};
  spec.fixation_model = FixationModel::center_biased;
  spec.pixels_per_degree = 30;
  spec.seed = 10;
  spec.distortion_layout = true;
  spec.with_models = true;

  // Single map, single worker.
  EvaluationConfig cfg;
  cfg.plan = full_plan(10);
  const SynthDataset d = generate_synthetic(spec);
  const ShuffleBank bank = build_shuffle_bank(d.fixation_sets(), spec.frame);
  const SynthImage& im = d.images[0];
  auto t0 = Clock::now();
  const auto recs = evaluate_pair(d.models.at("background")[0], im.entry, im.entry.fixations, im.density, bank, cfg, "m");
  const double single = seconds_since(t0);

  // 54 images x 5 models from disk, 4 workers.
  const fs::path dir = scratch("throughput");
  const DatasetManifest m = synth_dataset(spec, dir);
  const DatasetManifest loaded = load_manifest(dir / "manifest.json");
  cfg.jobs = 4;
  t0 = Clock::now();
  const BatchResult batch = evaluate_dataset(loaded, cfg);
  const double batch_s = seconds_since(t0);
  fs::remove_all(dir);

  const bool pass = recs.size() == 5 && single < 5.0 && batch.records.size() == 54 * 5 * 5 && batch_s < 300.0;
  return {pass, "one 768x512 map, 5 metrics x 100 trials x 8 blur levels: " + num(single, 3) +
                    " s (limit 5 s); 54 images x 5 models at 768x512, 4 workers on " +
                    std::to_string(std::thread::hardware_concurrency()) + " core(s): " + num(batch_s, 3) +
                    " s (limit 300 s)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence, AUC", auc_oracle},
      {"oracle equivalence, EMD", emd_oracle},
      {"center-bias neutralization", center_bias_neutralization},
      {"inversion penalty", inversion_penalty},
      {"false-positive penalty", false_positive_penalty},
      {"SEMD center-bias fix", semd_center_bias_fix},
      {"metric-definition invariants", metric_invariants},
      {"protocol determinism", protocol_determinism},
      {"harness statistics", harness_statistics},
      {"throughput", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
