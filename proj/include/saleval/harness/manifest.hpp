#pragma once

// Dataset manifest (UTF-8 JSON, manifest_version 1). Paths inside the
// manifest are resolved relative to the manifest's directory.
//
// {
//   "manifest_version": 1,
//   "pixels_per_degree": 30.0,
//   "bank_frame": [768, 512],                  // optional
//   "images": [
//     {"image_id": "bikes_blur_low", "width": 768, "height": 512,
//      "fixation_file": "fix/bikes_blur_low.txt",
//      "density_file": "gt/bikes_blur_low.pgm",  // optional
//      "distortion_type": "blur", "distortion_level": "low",
//      "complexity": "unspecified"}
//   ],
//   "models": [
//     {"model_id": "itti", "maps": {"bikes_blur_low": "maps/itti/bikes_blur_low.pgm"}}
//   ]
// }

#include "saleval/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saleval {

enum class DistortionType { none, blur, jpeg, noise };
enum class DistortionLevel { none, low, medium, high };
enum class Complexity { unspecified, easy, medium, hard };

std::string_view to_string(DistortionType t);
std::string_view to_string(DistortionLevel l);
std::string_view to_string(Complexity c);
std::optional<DistortionType> parse_distortion_type(std::string_view s);
std::optional<DistortionLevel> parse_distortion_level(std::string_view s);
std::optional<Complexity> parse_complexity(std::string_view s);

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImageEntry {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::filesystem::path fixation_file;
  std::optional<std::filesystem::path> density_file;
  DistortionType distortion_type = DistortionType::none;
  DistortionLevel distortion_level = DistortionLevel::none;
  Complexity complexity = Complexity::unspecified;
  /// Populated by load_manifest.
  FixationSet fixations;

  Frame frame() const { return {width, height}; }
};

struct ModelEntry {
  std::string model_id;
  std::map<std::string, std::filesystem::path> maps;  // image_id -> map file
};

struct DatasetManifest {
  int manifest_version = 1;
  double pixels_per_degree = 30.0;
  std::optional<Frame> bank_frame;
  std::vector<ImageEntry> images;
  std::vector<ModelEntry> models;
  std::filesystem::path base_dir;

  /// FWHM of the density-map Gaussian: one degree of visual angle.
  double fwhm_px() const { return pixels_per_degree; }
  /// Declared bank frame, or the component-wise maximum of the image frames.
  Frame shuffle_frame() const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Parses and fully validates a manifest: every referenced file exists, every
/// model supplies a map for every image, and fixation files agree with the
/// declared frames. Errors name the offending entry.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Writes `m` as manifest JSON (paths are written as stored).
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);

}  // namespace saleval
