#pragma once

#include "saleval/types.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>

namespace saleval {

/// Distribution of map values over equal-width bins spanning [0, 1]. The last
/// bin is right-closed so that 1.0 is counted.
struct ValueHistogram {
  Eigen::VectorXd bin_edges;  // bins() + 1 ascending edges, first 0, last 1
  Eigen::VectorXd mass;       // bin counts divided by `normalizer`
  double normalizer = 1.0;

  int bins() const { return static_cast<int>(mass.size()); }
  bool same_binning(const ValueHistogram& other) const {
    return bins() == other.bins() && bin_edges == other.bin_edges;
  }
};

/// Histogram of `values` with `bins` equal bins. Counts are divided by
/// `normalizer` when given, otherwise by the number of values. Values outside
/// [0, 1] are not counted.
ValueHistogram histogram_of(std::span<const double> values, int bins, std::optional<double> normalizer = {});

/// Histogram of map values sampled at `points` (map frame).
ValueHistogram hist_at_points(const SaliencyMap& s, std::span<const Point> points, int bins,
                              std::optional<double> normalizer = {});

/// 0.5 * [sum H log(H/Hh) + sum Hh log(Hh/H)], natural log, with epsilon added
/// to every bin of both histograms.
double symmetric_kld(const ValueHistogram& h, const ValueHistogram& hhat, double epsilon = 1e-12);

/// Jensen-Shannon divergence in bits. Both inputs are renormalized to unit
/// mass; the result lies in [0, 1].
double jsd(const ValueHistogram& p, const ValueHistogram& q);

}  // namespace saleval
