#include "saleval/harness/synth.hpp"

#include "saleval/io.hpp"
#include "saleval/rng.hpp"
#include "saleval/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace saleval {

std::string_view to_string(FixationModel m) {
  return m == FixationModel::center_biased ? "center-biased" : "off-center-blobs";
}

std::optional<FixationModel> parse_fixation_model(std::string_view s) {
  if (s == "center-biased") return FixationModel::center_biased;
  if (s == "off-center-blobs") return FixationModel::off_center_blobs;
  return std::nullopt;
}

const std::vector<std::string>& synth_model_ids() {
  static const std::vector<std::string> ids{"background", "centered_gaussian", "ground_truth", "lowres", "noisy"};
  return ids;
}

std::vector<FixationSet> SynthDataset::fixation_sets() const {
  std::vector<FixationSet> out;
  out.reserve(images.size());
  for (const SynthImage& im : images) out.push_back(im.entry.fixations);
  return out;
}

namespace {

Point draw_gaussian_point(Rng& rng, double cx, double cy, double sigma, Frame f) {
  for (;;) {
    const auto x = static_cast<int>(std::lround(cx + sigma * rng.normal()));
    const auto y = static_cast<int>(std::lround(cy + sigma * rng.normal()));
    if (f.contains({x, y})) return {x, y};
  }
}

std::vector<Point> center_biased(Rng& rng, const SynthSpec& spec) {
  const Frame f = spec.frame;
  const double sigma = spec.center_sigma_frac * std::min(f.width, f.height);
  std::vector<Point> pts;
  for (int i = 0; i < spec.fixations_per_image; ++i)
    pts.push_back(draw_gaussian_point(rng, (f.width - 1) / 2.0, (f.height - 1) / 2.0, sigma, f));
  return pts;
}

std::vector<Point> off_center_blobs(Rng& rng, const SynthSpec& spec) {
  const Frame f = spec.frame;
  const double short_side = std::min(f.width, f.height);
  const int clusters = 1 + static_cast<int>(rng.below(3));
  std::vector<std::pair<double, double>> centers;
  while (static_cast<int>(centers.size()) < clusters) {
    const double x = rng.uniform(0.1 * f.width, 0.9 * f.width);
    const double y = rng.uniform(0.1 * f.height, 0.9 * f.height);
    if (std::hypot(x - (f.width - 1) / 2.0, y - (f.height - 1) / 2.0) >= 0.25 * short_side) centers.emplace_back(x, y);
  }
  const double spread = 0.04 * short_side;
  std::vector<Point> pts;
  for (int i = 0; i < spec.fixations_per_image; ++i) {
    const auto& [cx, cy] = centers[rng.below(centers.size())];
    pts.push_back(draw_gaussian_point(rng, cx, cy, spread, f));
  }
  return pts;
}

SaliencyMap with_uniform_noise(const SaliencyMap& base, double amplitude, Rng& rng) {
  SaliencyMap::Grid g = base.values();
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] += amplitude * rng.uniform();
  return normalize_map(SaliencyMap(std::move(g)));
}

double noise_amplitude(DistortionLevel level) {
  switch (level) {
    case DistortionLevel::none:
    case DistortionLevel::low: return 0.1;
    case DistortionLevel::medium: return 0.3;
    case DistortionLevel::high: return 0.6;
  }
  return 0.1;
}

std::string image_name(int i, int count) {
  const int digits = std::max(3, static_cast<int>(std::to_string(count - 1).size()));
  std::string n = std::to_string(i);
  return "img" + std::string(static_cast<std::size_t>(std::max(0, digits - static_cast<int>(n.size()))), '0') + n;
}

}  // namespace

SynthDataset generate_synthetic(const SynthSpec& spec) {
  if (spec.num_images < 2) throw std::invalid_argument("synth: num_images must be >= 2");
  if (spec.frame.width < 4 || spec.frame.height < 4) throw std::invalid_argument("synth: frame must be at least 4x4");
  if (spec.fixations_per_image < 1) throw std::invalid_argument("synth: fixations_per_image must be >= 1");
  if (!(spec.pixels_per_degree > 0)) throw std::invalid_argument("synth: pixels_per_degree must be > 0");

  static constexpr DistortionType kTypes[] = {DistortionType::blur, DistortionType::jpeg, DistortionType::noise};
  static constexpr DistortionLevel kLevels[] = {DistortionLevel::low, DistortionLevel::medium, DistortionLevel::high};

  SynthDataset out;
  for (int i = 0; i < spec.num_images; ++i) {
    SynthImage im;
    im.entry.image_id = image_name(i, spec.num_images);
    im.entry.width = spec.frame.width;
    im.entry.height = spec.frame.height;
    if (spec.distortion_layout) {
      im.entry.distortion_type = kTypes[i % 3];
      im.entry.distortion_level = kLevels[(i / 3) % 3];
    }
    Rng rng(derive_seed(spec.seed, im.entry.image_id, "fixations", 0));
    im.entry.fixations.image_id = im.entry.image_id;
    im.entry.fixations.frame = spec.frame;
    im.entry.fixations.points =
        spec.fixation_model == FixationModel::center_biased ? center_biased(rng, spec) : off_center_blobs(rng, spec);
    im.density = density_from_fixations(im.entry.fixations, spec.pixels_per_degree);
    out.images.push_back(std::move(im));
  }

  if (spec.with_models) {
    const SaliencyMap center = centered_gaussian_baseline(spec.frame.width, spec.frame.height, 0.25);
    const int low_w = std::max(4, spec.frame.width / 12);
    const int low_h = std::max(4, spec.frame.height / 12);
    for (const SynthImage& im : out.images) {
      const SaliencyMap& gt = im.density.map;
      Rng bg_rng(derive_seed(spec.seed, im.entry.image_id, "background", 0));
      Rng noise_rng(derive_seed(spec.seed, im.entry.image_id, "noisy", 0));
      out.models["ground_truth"].push_back(gt);
      out.models["centered_gaussian"].push_back(center);
      out.models["background"].push_back(with_uniform_noise(gt, 0.3, bg_rng));
      out.models["noisy"].push_back(with_uniform_noise(gt, noise_amplitude(im.entry.distortion_level), noise_rng));
      out.models["lowres"].push_back(resize_map(gt, low_w, low_h));
    }
  }
  return out;
}

DatasetManifest synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  SynthDataset data = generate_synthetic(spec);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "fixations", ec);
  if (!ec) fs::create_directories(out_dir / "density", ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  DatasetManifest m;
  m.pixels_per_degree = spec.pixels_per_degree;
  m.base_dir = out_dir;
  for (SynthImage& im : data.images) {
    im.entry.fixation_file = fs::path("fixations") / (im.entry.image_id + ".txt");
    im.entry.density_file = fs::path("density") / (im.entry.image_id + ".pgm");
    write_fixations(out_dir / im.entry.fixation_file, im.entry.fixations);
    write_pgm(out_dir / *im.entry.density_file, im.density.map);
    m.images.push_back(im.entry);
  }
  for (const auto& [model_id, maps] : data.models) {
    fs::create_directories(out_dir / "maps" / model_id, ec);
    if (ec) throw IoError("cannot create '" + (out_dir / "maps" / model_id).string() + "': " + ec.message());
    ModelEntry me{model_id, {}};
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const std::string& id = data.images[i].entry.image_id;
      const fs::path rel = fs::path("maps") / model_id / (id + ".pgm");
      write_pgm(out_dir / rel, maps[i]);
      me.maps.emplace(id, rel);
    }
    m.models.push_back(std::move(me));
  }
  save_manifest(m, out_dir / "manifest.json");
  return m;
}

}  // namespace saleval
