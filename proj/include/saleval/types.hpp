#pragma once

#include <Eigen/Core>

#include <compare>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace saleval {

/// Thrown by a metric when its input has no defined score (e.g. a map with
/// zero variance). The harness records such scores as missing.
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Point {
  int x = 0;  // column
  int y = 0;  // row

  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Frame {
  int width = 0;
  int height = 0;

  bool contains(Point p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
  std::int64_t area() const { return std::int64_t{width} * height; }

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Ground-truth fixations of one image, in that image's pixel frame.
struct FixationSet {
  std::string image_id;
  std::vector<Point> points;
  Frame frame;

  /// Throws std::invalid_argument naming the image if a point lies outside
  /// the frame.
  void validate() const {
    if (frame.width < 1 || frame.height < 1)
      throw std::invalid_argument("fixation set '" + image_id + "': empty frame");
    for (const Point& p : points) {
      if (!frame.contains(p))
        throw std::invalid_argument("fixation set '" + image_id + "': point (" + std::to_string(p.x) +
                                    "," + std::to_string(p.y) + ") outside " +
                                    std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                                    " frame");
    }
  }
};

/// Dense W x H grid of non-negative intensities, stored row-major with
/// rows = height so that `values()(y, x)` addresses pixel (x, y).
template <typename Scalar>
class BasicSaliencyMap {
 public:
  using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicSaliencyMap() : values_(Grid::Zero(1, 1)) {}

  explicit BasicSaliencyMap(Grid values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1)
      throw std::invalid_argument("saliency map must be at least 1x1");
    if (!values_.allFinite() || (values_ < Scalar(0)).any())
      throw std::invalid_argument("saliency map values must be finite and non-negative");
  }

  static BasicSaliencyMap constant(int width, int height, Scalar value) {
    return BasicSaliencyMap(Grid::Constant(height, width, value));
  }

  static BasicSaliencyMap from_row_major(int width, int height, std::span<const Scalar> data) {
    if (data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("row-major buffer size does not match map dimensions");
    return BasicSaliencyMap(Eigen::Map<const Grid>(data.data(), height, width));
  }

  int width() const { return static_cast<int>(values_.cols()); }
  int height() const { return static_cast<int>(values_.rows()); }
  Frame frame() const { return {width(), height()}; }

  const Grid& values() const { return values_; }
  Scalar operator()(int x, int y) const { return values_(y, x); }
  Scalar at(Point p) const { return values_(p.y, p.x); }

  Scalar max() const { return values_.maxCoeff(); }
  Scalar mean() const { return values_.mean(); }
  /// Population standard deviation over all pixels.
  Scalar stddev() const {
    const Scalar mu = mean();
    return std::sqrt((values_ - mu).square().mean());
  }

  friend bool operator==(const BasicSaliencyMap& a, const BasicSaliencyMap& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           (a.values_ == b.values_).all();
  }

 private:
  Grid values_;
};

using SaliencyMap = BasicSaliencyMap<double>;

/// A ground-truth map built from fixations, tagged with the Gaussian FWHM used.
struct FixationDensityMap {
  SaliencyMap map;
  double fwhm_px = 0.0;
};

}  // namespace saleval
