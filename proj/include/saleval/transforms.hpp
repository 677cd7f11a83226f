#pragma once

// Map transforms used by the evaluation protocol. All functions are pure and
// templated on the map scalar type.

#include "saleval/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

namespace saleval {

/// Scales a map so its maximum is 1. An all-zero map is returned unchanged.
template <typename Scalar>
BasicSaliencyMap<Scalar> normalize_map(const BasicSaliencyMap<Scalar>& map) {
  const Scalar peak = map.max();
  if (peak <= Scalar(0)) return map;
  if (peak == Scalar(1)) return map;
  return BasicSaliencyMap<Scalar>(map.values() / peak);
}

/// Bilinear resize using pixel-center alignment; sampling positions outside
/// the source are clamped to the border pixels.
template <typename Scalar>
BasicSaliencyMap<Scalar> resize_map(const BasicSaliencyMap<Scalar>& map, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) throw std::invalid_argument("resize_map: target dimensions must be >= 1");
  if (target_w == map.width() && target_h == map.height()) return map;

  struct Tap {
    int i0, i1;
    Scalar frac;
  };
  auto taps = [](int src, int dst) {
    std::vector<Tap> out(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int d = 0; d < dst; ++d) {
      double pos = (d + 0.5) * scale - 0.5;
      pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
      const int i0 = static_cast<int>(std::floor(pos));
      const int i1 = std::min(i0 + 1, src - 1);
      out[static_cast<std::size_t>(d)] = {i0, i1, static_cast<Scalar>(pos - i0)};
    }
    return out;
  };
  const auto xs = taps(map.width(), target_w);
  const auto ys = taps(map.height(), target_h);

  const auto& src = map.values();
  typename BasicSaliencyMap<Scalar>::Grid out(target_h, target_w);
  for (int y = 0; y < target_h; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < target_w; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      const Scalar top = src(ty.i0, tx.i0) * (1 - tx.frac) + src(ty.i0, tx.i1) * tx.frac;
      const Scalar bot = src(ty.i1, tx.i0) * (1 - tx.frac) + src(ty.i1, tx.i1) * tx.frac;
      out(y, x) = std::max(Scalar(0), top * (1 - ty.frac) + bot * ty.frac);
    }
  }
  return BasicSaliencyMap<Scalar>(std::move(out));
}

namespace detail {

/// Sampled Gaussian kernel exp(-k^2 / 2 sigma^2) for |k| <= ceil(3 sigma),
/// normalized to unit sum. Index radius holds k = 0.
template <typename Scalar>
std::vector<Scalar> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<Scalar> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = static_cast<Scalar>(w);
    sum += w;
  }
  for (Scalar& w : k) w = static_cast<Scalar>(w / sum);
  return k;
}

/// Convolves along the row index of a row-major grid. Near the borders the
/// kernel is truncated and renormalized over the taps that fall inside.
template <typename Grid, typename Scalar>
Grid convolve_rows(const Grid& in, const std::vector<Scalar>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  const int rows = static_cast<int>(in.rows());
  Grid out = Grid::Zero(in.rows(), in.cols());
  for (int y = 0; y < rows; ++y) {
    const int lo = std::max(-radius, -y);
    const int hi = std::min(radius, rows - 1 - y);
    Scalar norm = 0;
    for (int k = lo; k <= hi; ++k) {
      const Scalar w = kernel[static_cast<std::size_t>(k + radius)];
      out.row(y) += w * in.row(y + k);
      norm += w;
    }
    out.row(y) /= norm;
  }
  return out;
}

}  // namespace detail

/// Separable Gaussian blur with kernel radius ceil(3 sigma). sigma = 0 is the
/// identity.
template <typename Scalar>
BasicSaliencyMap<Scalar> gaussian_blur(const BasicSaliencyMap<Scalar>& map, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return map;
  using Grid = typename BasicSaliencyMap<Scalar>::Grid;
  const auto kernel = detail::gaussian_kernel<Scalar>(sigma);
  Grid vertical = detail::convolve_rows(map.values(), kernel);
  Grid transposed = vertical.transpose();
  Grid horizontal = detail::convolve_rows(transposed, kernel);
  Grid result = horizontal.transpose();
  return BasicSaliencyMap<Scalar>(result.max(Scalar(0)));
}

/// v -> 1 - v. Requires a normalized map (all values in [0, 1]).
template <typename Scalar>
BasicSaliencyMap<Scalar> invert_map(const BasicSaliencyMap<Scalar>& map) {
  if (map.max() > Scalar(1)) throw std::invalid_argument("invert_map: map must be normalized to [0, 1]");
  return BasicSaliencyMap<Scalar>(Scalar(1) - map.values());
}

/// Peak-normalized isotropic Gaussian centered at ((W-1)/2, (H-1)/2) with
/// sigma = sigma_frac * min(W, H).
template <typename Scalar = double>
BasicSaliencyMap<Scalar> centered_gaussian_baseline(int width, int height, double sigma_frac) {
  if (width < 1 || height < 1) throw std::invalid_argument("centered_gaussian_baseline: empty frame");
  if (!(sigma_frac > 0.0)) throw std::invalid_argument("centered_gaussian_baseline: sigma_frac must be > 0");
  const double sigma = sigma_frac * std::min(width, height);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gx(width), gy(height);
  for (int x = 0; x < width; ++x) gx(x) = static_cast<Scalar>(std::exp(-0.5 * (x - cx) * (x - cx) / (sigma * sigma)));
  for (int y = 0; y < height; ++y) gy(y) = static_cast<Scalar>(std::exp(-0.5 * (y - cy) * (y - cy) / (sigma * sigma)));
  typename BasicSaliencyMap<Scalar>::Grid grid = (gy * gx.transpose()).array();
  return normalize_map(BasicSaliencyMap<Scalar>(std::move(grid)));
}

/// Gaussian sigma corresponding to a full width at half maximum.
inline double sigma_from_fwhm(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

/// Binary fixation map (1 at each distinct fixated pixel) convolved with an
/// untruncated, zero-padded 2-D Gaussian of the given FWHM, then normalized to
/// peak 1. Evaluated as the rank-N product Gy * Gx^T over distinct fixations.
inline FixationDensityMap density_from_fixations(const FixationSet& fixations, double fwhm_px) {
  if (fixations.points.empty())
    throw std::invalid_argument("density_from_fixations: fixation set '" + fixations.image_id + "' is empty");
  if (!(fwhm_px > 0.0)) throw std::invalid_argument("density_from_fixations: fwhm must be > 0");
  fixations.validate();

  const std::set<Point> distinct(fixations.points.begin(), fixations.points.end());
  const double sigma = sigma_from_fwhm(fwhm_px);
  const int w = fixations.frame.width;
  const int h = fixations.frame.height;
  const auto n = static_cast<Eigen::Index>(distinct.size());

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> gy(h, n), gx(w, n);
  Eigen::Index col = 0;
  for (const Point& p : distinct) {
    for (int y = 0; y < h; ++y) gy(y, col) = std::exp(-0.5 * (y - p.y) * (y - p.y) / (sigma * sigma));
    for (int x = 0; x < w; ++x) gx(x, col) = std::exp(-0.5 * (x - p.x) * (x - p.x) / (sigma * sigma));
    ++col;
  }
  SaliencyMap::Grid grid = (gy * gx.transpose()).array();
  return {normalize_map(SaliencyMap(std::move(grid))), fwhm_px};
}

}  // namespace saleval
