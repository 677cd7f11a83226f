#include "saleval/harness/selfcheck.hpp"

#include "saleval/emd.hpp"
#include "saleval/fixation_metrics.hpp"
#include "saleval/histogram.hpp"
#include "saleval/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace saleval {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

ValueHistogram random_histogram(Rng& rng, int bins) {
  // Bin masses from a random sample, with a few empty bins now and then.
  std::vector<double> values;
  const int n = 1 + static_cast<int>(rng.below(64));
  for (int i = 0; i < n; ++i) values.push_back(std::pow(rng.uniform(), 0.3 + 2.0 * rng.uniform()));
  return histogram_of(values, bins);
}

double jsd_by_definition(const ValueHistogram& p, const ValueHistogram& q) {
  const Eigen::ArrayXd a = p.mass.array() / p.mass.sum();
  const Eigen::ArrayXd b = q.mass.array() / q.mass.sum();
  const Eigen::ArrayXd m = 0.5 * (a + b);
  double kl_a = 0.0, kl_b = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > 0) kl_a += a(i) * std::log2(a(i) / m(i));
    if (b(i) > 0) kl_b += b(i) * std::log2(b(i) / m(i));
  }
  return 0.5 * kl_a + 0.5 * kl_b;
}

}  // namespace

CheckResult check_auc_oracle(std::uint64_t seed, int cases) {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(seed, "selfcheck", "auc", 0));
  double worst_small = 0.0, worst_large = 0.0;
  bool pass = true;
  for (int c = 0; c < cases; ++c) {
    const int np = 8 + static_cast<int>(rng.below(249));
    const int nn = 8 + static_cast<int>(rng.below(249));
    const double shift = rng.uniform(0.2, 3.0);
    std::vector<double> pos(static_cast<std::size_t>(np)), neg(static_cast<std::size_t>(nn));
    for (double& v : pos) v = std::pow(rng.uniform(), 1.0 / shift);
    for (double& v : neg) v = rng.uniform();
    const double err = std::abs(auc_of_curve(roc_from_samples(pos, neg)) - auc_pair_oracle(pos, neg));
    const bool large = std::min(np, nn) >= 64;
    (large ? worst_large : worst_small) = std::max(large ? worst_large : worst_small, err);
    if (err > (large ? 0.01 : 0.05)) pass = false;
  }
  return {"auc-pair-counting", pass,
          std::to_string(cases) + " cases, max err " + fmt(worst_large) + " (n>=64), " + fmt(worst_small) + " (n<64)",
          seconds_since(t0)};
}

CheckResult check_emd_oracle(std::uint64_t seed, int cases) {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(seed, "selfcheck", "emd", 0));
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int bins = 1 + static_cast<int>(rng.below(8));
    const GroundDistanceSpec d{1.0 + std::floor(rng.uniform(0.0, 8.0))};
    Eigen::VectorXd h1(bins), h2(bins);
    for (int i = 0; i < bins; ++i) {
      h1(i) = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 3.0);
      h2(i) = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 3.0);
    }
    worst = std::max(worst, std::abs(emd_hat(h1, h2, d) - emd_brute_oracle(h1, h2, d)));
  }
  return {"emd-linear-program", worst <= 1e-9, std::to_string(cases) + " cases, max err " + fmt(worst),
          seconds_since(t0)};
}

CheckResult check_jsd_definition(std::uint64_t seed, int triples) {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(seed, "selfcheck", "jsd", 0));
  constexpr int kBins = 16;
  double worst_def = 0.0, worst_self = 0.0, worst_sym = 0.0, worst_tri = 0.0;
  bool in_range = true;
  for (int t = 0; t < triples; ++t) {
    const ValueHistogram p = random_histogram(rng, kBins);
    const ValueHistogram q = random_histogram(rng, kBins);
    const ValueHistogram r = random_histogram(rng, kBins);
    const double pq = jsd(p, q), qr = jsd(q, r), pr = jsd(p, r);
    in_range = in_range && pq >= 0.0 && pq <= 1.0;
    worst_def = std::max(worst_def, std::abs(pq - jsd_by_definition(p, q)));
    worst_self = std::max(worst_self, jsd(p, p));
    worst_sym = std::max(worst_sym, std::abs(pq - jsd(q, p)));
    worst_tri = std::max(worst_tri, std::sqrt(pr) - std::sqrt(pq) - std::sqrt(qr));
  }
  const bool pass = in_range && worst_def <= 1e-12 && worst_self <= 1e-15 && worst_sym <= 1e-15 && worst_tri <= 1e-12;
  return {"jsd-definition", pass,
          std::to_string(triples) + " triples, definition err " + fmt(worst_def) + ", jsd(p,p) " + fmt(worst_self) +
              ", triangle excess " + fmt(std::max(0.0, worst_tri)),
          seconds_since(t0)};
}

std::vector<CheckResult> run_oracle_suites(std::uint64_t seed) {
  return {check_auc_oracle(seed), check_emd_oracle(seed), check_jsd_definition(seed)};
}

}  // namespace saleval
