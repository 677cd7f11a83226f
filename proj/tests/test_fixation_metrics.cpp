#include "saleval/fixation_metrics.hpp"
#include "saleval/harness/synth.hpp"
#include "saleval/rng.hpp"
#include "saleval/transforms.hpp"

#include <doctest.h>

using namespace saleval;

namespace {

SaliencyMap random_map(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  SaliencyMap::Grid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.uniform();
  return SaliencyMap(g);
}

SaliencyMap affine(const SaliencyMap& s, double a, double b) { return SaliencyMap(s.values() * a + b); }

// Exhaustive ROC: one point per distinct threshold taken from the data.
double brute_force_auc(std::span<const double> pos, std::span<const double> neg) {
  std::vector<double> ts(pos.begin(), pos.end());
  ts.insert(ts.end(), neg.begin(), neg.end());
  std::sort(ts.begin(), ts.end(), std::greater<>());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<std::pair<double, double>> pts{{0, 0}};
  for (double t : ts) {
    const double tp = static_cast<double>(std::count_if(pos.begin(), pos.end(), [t](double v) { return v >= t; }));
    const double fp = static_cast<double>(std::count_if(neg.begin(), neg.end(), [t](double v) { return v >= t; }));
    pts.emplace_back(fp / static_cast<double>(neg.size()), tp / static_cast<double>(pos.size()));
  }
  pts.emplace_back(1, 1);
  double area = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2;
  return area;
}

struct Dataset {
  SynthDataset data;
  ShuffleBank bank;
};

Dataset make_dataset(FixationModel model, int images, std::uint64_t seed) {
  SynthSpec spec;
  spec.num_images = images;
  spec.frame = {80, 60};
  spec.fixation_model = model;
  spec.seed = seed;
  spec.fixations_per_image = 30;
  spec.pixels_per_degree = 6;
  SynthDataset d = generate_synthetic(spec);
  ShuffleBank bank = build_shuffle_bank(d.fixation_sets(), spec.frame);
  return {std::move(d), std::move(bank)};
}

TrialPlan small_plan(int trials = 20) {
  TrialPlan p;
  p.num_trials = trials;
  p.master_seed = 3;
  return p;
}

}  // namespace

TEST_CASE("auc_pair_oracle") {
  const std::vector<double> one{1.0}, zero{0.0}, half{0.5};
  CHECK(auc_pair_oracle(one, zero) == 1.0);
  CHECK(auc_pair_oracle(half, half) == 0.5);
  const std::vector<double> pos{0.9, 0.4}, neg{0.6, 0.1};
  CHECK(auc_pair_oracle(pos, neg) == 0.75);
  CHECK_THROWS_AS(auc_pair_oracle({}, neg), std::invalid_argument);
}

TEST_CASE("roc_from_samples and auc_of_curve") {
  SUBCASE("perfect separation") {
    const std::vector<double> pos(10, 1.0), neg(10, 0.0);
    const RocCurve c = roc_from_samples(pos, neg);
    CHECK(c.thresholds.size() == kThresholdLevels);
    bool corner = false;
    for (std::size_t i = 0; i < c.tpr.size(); ++i) corner = corner || (c.fpr[i] == 0.0 && c.tpr[i] == 1.0);
    CHECK(corner);
    CHECK(auc_of_curve(c) == 1.0);
  }
  SUBCASE("identical distributions sit on the diagonal") {
    Rng rng(1);
    std::vector<double> pos(4000), neg(4000);
    for (double& v : pos) v = rng.uniform();
    for (double& v : neg) v = rng.uniform();
    const RocCurve c = roc_from_samples(pos, neg);
    double worst = 0;
    for (std::size_t i = 0; i < c.tpr.size(); ++i) worst = std::max(worst, std::abs(c.tpr[i] - c.fpr[i]));
    CHECK(worst < 0.05);
    CHECK(auc_of_curve(c) == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("all ties give exactly 0.5") {
    const std::vector<double> pos(7, 0.3), neg(9, 0.3);
    CHECK(auc_of_curve(roc_from_samples(pos, neg)) == 0.5);
  }
  SUBCASE("5-value lists on the grid match exhaustive enumeration") {
    // Values on the k/255 grid make the 256-level curve exact.
    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> pos(5), neg(5);
      for (double& v : pos) v = static_cast<double>(rng.below(256)) / 255.0;
      for (double& v : neg) v = static_cast<double>(rng.below(256)) / 255.0;
      const double fast = auc_of_curve(roc_from_samples(pos, neg));
      CHECK(fast == doctest::Approx(brute_force_auc(pos, neg)).epsilon(1e-12));
      CHECK(fast == doctest::Approx(auc_pair_oracle(pos, neg)).epsilon(1e-12));
    }
  }
  SUBCASE("random small instances within 0.01 of pair counting") {
    Rng rng(23);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> pos(64 + rng.below(64)), neg(64 + rng.below(64));
      for (double& v : pos) v = std::sqrt(rng.uniform());
      for (double& v : neg) v = rng.uniform();
      CHECK(std::abs(auc_of_curve(roc_from_samples(pos, neg)) - auc_pair_oracle(pos, neg)) <= 0.01);
    }
  }
  SUBCASE("grid refinement 256 -> 1024 moves the area by < 0.005") {
    const SaliencyMap s = normalize_map(gaussian_blur(random_map(64, 48, 4), 4.0));
    Rng rng(5);
    std::vector<double> pos, neg;
    for (int i = 0; i < 300; ++i) {
      pos.push_back(s(static_cast<int>(rng.below(32)) + 16, static_cast<int>(rng.below(24)) + 12));
      neg.push_back(s(static_cast<int>(rng.below(64)), static_cast<int>(rng.below(48))));
    }
    CHECK(std::abs(auc_of_curve(roc_from_samples(pos, neg, 256)) - auc_of_curve(roc_from_samples(pos, neg, 1024))) <
          0.005);
  }
}

TEST_CASE("cc") {
  const SaliencyMap g = normalize_map(gaussian_blur(random_map(30, 20, 2), 2.0));
  CHECK(cc(g, g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cc(invert_map(g), g) == doctest::Approx(-1.0).epsilon(1e-12));
  const SaliencyMap s = random_map(30, 20, 3);
  CHECK(std::abs(cc(affine(s, 3.5, 0.2), g) - cc(s, g)) < 1e-9);
  CHECK_THROWS_AS(cc(SaliencyMap::constant(30, 20, 0.5), g), DegenerateInput);
  CHECK_THROWS_AS(cc(SaliencyMap::constant(3, 2, 0.5), g), std::invalid_argument);
}

TEST_CASE("sim") {
  const SaliencyMap g = normalize_map(random_map(8, 8, 9));
  CHECK(sim(g, g) == doctest::Approx(1.0));

  SaliencyMap::Grid lo = SaliencyMap::Grid::Constant(4, 4, 0.1), hi = SaliencyMap::Grid::Constant(4, 4, 0.9);
  lo(0, 0) = 0.2;
  hi(0, 0) = 1.0;
  CHECK(sim(SaliencyMap(lo), SaliencyMap(hi), 4) == 0.0);

  SUBCASE("hand-counted 4-bin intersection") {
    const SaliencyMap a = random_map(8, 8, 31), b = random_map(8, 8, 32);
    std::array<int, 4> ha{}, hb{};
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) {
        ++ha[static_cast<std::size_t>(std::min(3, static_cast<int>(a(x, y) * 4)))];
        ++hb[static_cast<std::size_t>(std::min(3, static_cast<int>(b(x, y) * 4)))];
      }
    int inter = 0;
    for (std::size_t k = 0; k < 4; ++k) inter += std::min(ha[k], hb[k]);
    CHECK(sim(a, b, 4) == doctest::Approx(inter / 64.0).epsilon(1e-12));
  }
}

TEST_CASE("nss") {
  const SaliencyMap s = random_map(20, 15, 8);
  Eigen::Index r, c;
  s.values().maxCoeff(&r, &c);
  const FixationSet fix{"x", {{static_cast<int>(c), static_cast<int>(r)}}, {20, 15}};
  const double expected = (s.max() - s.mean()) / s.stddev();
  CHECK(nss(s, fix) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(nss(s, fix) > 0);
  CHECK(std::abs(nss(affine(s, 0.01, 5.0), fix) - nss(s, fix)) < 1e-9);
  CHECK_THROWS_AS(nss(SaliencyMap::constant(20, 15, 0.3), fix), DegenerateInput);

  SUBCASE("fixations in another frame are rescaled") {
    const FixationSet big{"x", {{2 * static_cast<int>(c), 2 * static_cast<int>(r)}}, {40, 30}};
    CHECK(nss(s, big) == nss(s, fix));
  }
}

TEST_CASE("snss") {
  const SaliencyMap s = random_map(20, 15, 12);
  const std::vector<Point> pos{{1, 2}, {5, 5}, {19, 14}}, neg{{0, 0}, {7, 3}};
  CHECK(snss_trial(s, pos, neg) == doctest::Approx(-snss_trial(s, neg, pos)).epsilon(1e-15));
  CHECK(std::abs(snss_trial(affine(s, 4.0, 1.0), pos, neg) - snss_trial(s, pos, neg)) < 1e-9);

  const Dataset cb = make_dataset(FixationModel::center_biased, 30, 4);
  const TrialPlan plan = small_plan();
  const SaliencyMap center = centered_gaussian_baseline(80, 60, 0.25);
  double mean = 0;
  for (const SynthImage& im : cb.data.images) mean += snss(center, im.entry.fixations, cb.bank, plan).value;
  mean /= static_cast<double>(cb.data.images.size());
  CHECK(std::abs(mean) < 0.1);

  const Dataset off = make_dataset(FixationModel::off_center_blobs, 12, 5);
  for (const SynthImage& im : off.data.images) {
    const MetricScore m = snss(im.density.map, im.entry.fixations, off.bank, plan);
    CHECK(m.value > 0);
    CHECK(m.trials_used == plan.num_trials);
    CHECK(m.metric_id == "snss");
    CHECK(std::abs(snss(affine(im.density.map, 2.0, 0.5), im.entry.fixations, off.bank, plan).value - m.value) < 1e-9);
  }
}

TEST_CASE("auc_f, auc_s, sauc") {
  const Dataset off = make_dataset(FixationModel::off_center_blobs, 10, 6);
  const TrialPlan plan = small_plan();
  const SaliencyMap flat = SaliencyMap::constant(80, 60, 0.4);
  for (const SynthImage& im : off.data.images) {
    const FixationSet& fix = im.entry.fixations;
    CHECK(auc_f(im.density.map, fix, plan).value > 0.9);
    CHECK(auc_f(flat, fix, plan).value == 0.5);
    CHECK(sauc(flat, fix, off.bank, plan).value == 0.5);
    CHECK(sauc(im.density.map, fix, off.bank, plan).value > 0.5);
    CHECK(auc_s(im.density.map, im.density.map) > 0.99);
    CHECK(auc_s(flat, im.density.map) == 0.5);
    for (double v : {auc_f(im.density.map, fix, plan).value, sauc(im.density.map, fix, off.bank, plan).value})
      CHECK((v >= 0.0 && v <= 1.0));
  }
  CHECK_THROWS_AS(auc_s(flat, flat), DegenerateInput);
}

TEST_CASE("center-bias vulnerability of AUC-F on center-biased data") {
  const Dataset cb = make_dataset(FixationModel::center_biased, 30, 8);
  const TrialPlan plan = small_plan();
  const SaliencyMap center = centered_gaussian_baseline(80, 60, 0.25);
  double aucf = 0, s_auc = 0;
  for (const SynthImage& im : cb.data.images) {
    aucf += auc_f(center, im.entry.fixations, plan).value;
    s_auc += sauc(center, im.entry.fixations, cb.bank, plan).value;
  }
  aucf /= 30;
  s_auc /= 30;
  CHECK(aucf > 0.6);
  CHECK(s_auc == doctest::Approx(0.5).epsilon(0.1));
}
