#pragma once

// Synthetic eye-tracking datasets for validating the metrics without the
// original databases.

#include "saleval/harness/manifest.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace saleval {

enum class FixationModel {
  center_biased,     // i.i.d. draws from one centered 2-D Gaussian
  off_center_blobs,  // 1-3 tight clusters at random off-center locations
};

std::string_view to_string(FixationModel m);
std::optional<FixationModel> parse_fixation_model(std::string_view s);

struct SynthSpec {
  int num_images = 20;
  Frame frame{160, 120};
  FixationModel fixation_model = FixationModel::center_biased;
  std::uint64_t seed = 1;
  int fixations_per_image = 30;
  double pixels_per_degree = 8.0;  // density-map FWHM in pixels
  /// Spread of the center-biased fixation Gaussian, as a fraction of min(W, H).
  double center_sigma_frac = 0.15;
  /// Tag images round-robin with {blur, jpeg, noise} x {low, medium, high}.
  bool distortion_layout = false;
  /// Also emit synthetic model maps (see synth_model_ids).
  bool with_models = false;
};

/// Model ids emitted when SynthSpec::with_models is set:
///  ground_truth       the image's own density map
///  centered_gaussian  centered Gaussian, sigma = 0.25 min(W, H)
///  background         density map plus uniform noise up to 30 % of the peak
///  noisy              density map plus uniform noise growing with the level tag
///  lowres             density map stored at 1/12 resolution
const std::vector<std::string>& synth_model_ids();

struct SynthImage {
  ImageEntry entry;
  FixationDensityMap density;
};

struct SynthDataset {
  std::vector<SynthImage> images;
  /// model id -> one map per image, in image order.
  std::map<std::string, std::vector<SaliencyMap>> models;

  std::vector<FixationSet> fixation_sets() const;
};

/// In-memory generation; identical spec gives identical output.
SynthDataset generate_synthetic(const SynthSpec& spec);

/// Writes fixation files, density maps (16-bit PGM), optional model maps and
/// manifest.json under `out_dir`; returns the manifest as written (paths
/// relative to out_dir, fixations loaded).
DatasetManifest synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace saleval
