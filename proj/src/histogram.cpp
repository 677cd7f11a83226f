#include "saleval/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saleval {

namespace {

void require_same_binning(const ValueHistogram& a, const ValueHistogram& b, const char* what) {
  if (!a.same_binning(b)) throw std::invalid_argument(std::string(what) + ": histogram binning mismatch");
}

/// sum_i p_i log2(p_i / q_i) with 0 log 0 = 0. Requires q_i > 0 wherever p_i > 0.
double kl_bits(const Eigen::ArrayXd& p, const Eigen::ArrayXd& q) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) d += p(i) * std::log2(p(i) / q(i));
  return d;
}

}  // namespace

ValueHistogram histogram_of(std::span<const double> values, int bins, std::optional<double> normalizer) {
  if (bins < 2) throw std::invalid_argument("histogram: bins must be >= 2");
  if (values.empty()) throw std::invalid_argument("histogram: no values");
  const double norm = normalizer.value_or(static_cast<double>(values.size()));
  if (!(norm > 0.0)) throw std::invalid_argument("histogram: normalizer must be > 0");

  ValueHistogram h;
  h.bin_edges = Eigen::VectorXd::LinSpaced(bins + 1, 0.0, 1.0);
  h.mass = Eigen::VectorXd::Zero(bins);
  h.normalizer = norm;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) continue;
    const int b = std::min(static_cast<int>(v * bins), bins - 1);
    h.mass(b) += 1.0;
  }
  h.mass /= norm;
  return h;
}

ValueHistogram hist_at_points(const SaliencyMap& s, std::span<const Point> points, int bins,
                              std::optional<double> normalizer) {
  if (points.empty()) throw std::invalid_argument("hist_at_points: no points");
  std::vector<double> values;
  values.reserve(points.size());
  for (const Point& p : points) {
    if (!s.frame().contains(p)) throw std::invalid_argument("hist_at_points: point outside map frame");
    values.push_back(s.at(p));
  }
  return histogram_of(values, bins, normalizer);
}

double symmetric_kld(const ValueHistogram& h, const ValueHistogram& hhat, double epsilon) {
  require_same_binning(h, hhat, "symmetric_kld");
  if (!(epsilon > 0.0)) throw std::invalid_argument("symmetric_kld: epsilon must be > 0");
  const Eigen::ArrayXd a = h.mass.array() + epsilon;
  const Eigen::ArrayXd b = hhat.mass.array() + epsilon;
  // a log(a/b) + b log(b/a) = (a - b) log(a/b), each term >= 0.
  return std::max(0.0, 0.5 * ((a - b) * (a / b).log()).sum());
}

double jsd(const ValueHistogram& p, const ValueHistogram& q) {
  require_same_binning(p, q, "jsd");
  const double sp = p.mass.sum();
  const double sq = q.mass.sum();
  if (!(sp > 0.0) || !(sq > 0.0)) throw std::invalid_argument("jsd: histogram with zero total mass");
  const Eigen::ArrayXd pn = p.mass.array() / sp;
  const Eigen::ArrayXd qn = q.mass.array() / sq;
  const Eigen::ArrayXd m = 0.5 * (pn + qn);
  return std::clamp(0.5 * (kl_bits(pn, m) + kl_bits(qn, m)), 0.0, 1.0);
}

}  // namespace saleval
