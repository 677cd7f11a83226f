#include "saleval/harness/manifest.hpp"

#include "saleval/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace saleval {

using nlohmann::json;

std::string_view to_string(DistortionType t) {
  switch (t) {
    case DistortionType::none: return "none";
    case DistortionType::blur: return "blur";
    case DistortionType::jpeg: return "jpeg";
    case DistortionType::noise: return "noise";
  }
  return "none";
}

std::string_view to_string(DistortionLevel l) {
  switch (l) {
    case DistortionLevel::none: return "none";
    case DistortionLevel::low: return "low";
    case DistortionLevel::medium: return "medium";
    case DistortionLevel::high: return "high";
  }
  return "none";
}

std::string_view to_string(Complexity c) {
  switch (c) {
    case Complexity::unspecified: return "unspecified";
    case Complexity::easy: return "easy";
    case Complexity::medium: return "medium";
    case Complexity::hard: return "hard";
  }
  return "unspecified";
}

std::optional<DistortionType> parse_distortion_type(std::string_view s) {
  for (auto t : {DistortionType::none, DistortionType::blur, DistortionType::jpeg, DistortionType::noise})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<DistortionLevel> parse_distortion_level(std::string_view s) {
  for (auto l : {DistortionLevel::none, DistortionLevel::low, DistortionLevel::medium, DistortionLevel::high})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

std::optional<Complexity> parse_complexity(std::string_view s) {
  for (auto c : {Complexity::unspecified, Complexity::easy, Complexity::medium, Complexity::hard})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

Frame DatasetManifest::shuffle_frame() const {
  if (bank_frame) return *bank_frame;
  Frame f{1, 1};
  for (const ImageEntry& im : images) {
    f.width = std::max(f.width, im.width);
    f.height = std::max(f.height, im.height);
  }
  return f;
}

std::filesystem::path DatasetManifest::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

namespace {

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw LoadError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw LoadError(where + ": field '" + key + "' has the wrong type");
  }
}

template <typename Enum, typename Parser>
Enum tag(const json& j, const char* key, Enum fallback, Parser parse, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto text = field<std::string>(j, key, where);
  const auto v = parse(text);
  if (!v) throw LoadError(where + ": unknown " + key + " '" + text + "'");
  return *v;
}

void require_file(const DatasetManifest& m, const std::filesystem::path& p, const std::string& where) {
  if (!std::filesystem::is_regular_file(m.resolve(p))) throw LoadError(where + ": file not found: " + m.resolve(p).string());
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("manifest: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError("manifest " + path.string() + ": " + e.what());
  }

  DatasetManifest m;
  m.base_dir = path.parent_path();
  const std::string top = "manifest " + path.string();
  m.manifest_version = field<int>(doc, "manifest_version", top);
  if (m.manifest_version != 1)
    throw LoadError(top + ": unsupported manifest_version " + std::to_string(m.manifest_version));
  if (doc.contains("pixels_per_degree")) m.pixels_per_degree = field<double>(doc, "pixels_per_degree", top);
  if (!(m.pixels_per_degree > 0)) throw LoadError(top + ": pixels_per_degree must be > 0");
  if (doc.contains("bank_frame")) {
    const auto bf = field<std::vector<int>>(doc, "bank_frame", top);
    if (bf.size() != 2 || bf[0] < 1 || bf[1] < 1) throw LoadError(top + ": bank_frame must be [width, height]");
    m.bank_frame = Frame{bf[0], bf[1]};
  }

  std::set<std::string> ids;
  for (const json& ji : field<json>(doc, "images", top)) {
    ImageEntry im;
    im.image_id = field<std::string>(ji, "image_id", top + " image");
    const std::string where = "image '" + im.image_id + "'";
    if (!ids.insert(im.image_id).second) throw LoadError(where + ": duplicate image_id");
    im.width = field<int>(ji, "width", where);
    im.height = field<int>(ji, "height", where);
    if (im.width < 1 || im.height < 1) throw LoadError(where + ": width and height must be >= 1");
    im.fixation_file = field<std::string>(ji, "fixation_file", where);
    if (ji.contains("density_file")) im.density_file = std::filesystem::path(field<std::string>(ji, "density_file", where));
    im.distortion_type = tag(ji, "distortion_type", DistortionType::none, parse_distortion_type, where);
    im.distortion_level = tag(ji, "distortion_level", DistortionLevel::none, parse_distortion_level, where);
    im.complexity = tag(ji, "complexity", Complexity::unspecified, parse_complexity, where);

    require_file(m, im.fixation_file, where);
    if (im.density_file) require_file(m, *im.density_file, where);
    try {
      im.fixations = read_fixations(m.resolve(im.fixation_file), im.image_id);
    } catch (const IoError& e) {
      throw LoadError(where + ": " + e.what());
    }
    if (im.fixations.frame != im.frame())
      throw LoadError(where + ": fixation file frame " + std::to_string(im.fixations.frame.width) + "x" +
                      std::to_string(im.fixations.frame.height) + " differs from declared " +
                      std::to_string(im.width) + "x" + std::to_string(im.height));
    if (im.fixations.points.empty()) throw LoadError(where + ": no fixations");
    m.images.push_back(std::move(im));
  }
  if (m.images.empty()) throw LoadError(top + ": no images");

  std::set<std::string> model_ids;
  for (const json& jm : field<json>(doc, "models", top)) {
    ModelEntry me;
    me.model_id = field<std::string>(jm, "model_id", top + " model");
    const std::string where = "model '" + me.model_id + "'";
    if (!model_ids.insert(me.model_id).second) throw LoadError(where + ": duplicate model_id");
    const json maps = field<json>(jm, "maps", where);
    if (!maps.is_object()) throw LoadError(where + ": 'maps' must be an object of image_id -> path");
    for (auto it = maps.begin(); it != maps.end(); ++it) {
      if (!ids.contains(it.key())) throw LoadError(where + ": map for unknown image '" + it.key() + "'");
      if (!it.value().is_string()) throw LoadError(where + ": map path for '" + it.key() + "' must be a string");
      me.maps.emplace(it.key(), std::filesystem::path(it.value().get<std::string>()));
    }
    for (const ImageEntry& im : m.images) {
      const auto it = me.maps.find(im.image_id);
      if (it == me.maps.end()) throw LoadError(where + ": no map for image '" + im.image_id + "'");
      require_file(m, it->second, where + " image '" + im.image_id + "'");
    }
    m.models.push_back(std::move(me));
  }
  return m;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  json doc;
  doc["manifest_version"] = m.manifest_version;
  doc["pixels_per_degree"] = m.pixels_per_degree;
  if (m.bank_frame) doc["bank_frame"] = {m.bank_frame->width, m.bank_frame->height};
  doc["images"] = json::array();
  for (const ImageEntry& im : m.images) {
    json ji{{"image_id", im.image_id},
            {"width", im.width},
            {"height", im.height},
            {"fixation_file", im.fixation_file.generic_string()},
            {"distortion_type", to_string(im.distortion_type)},
            {"distortion_level", to_string(im.distortion_level)},
            {"complexity", to_string(im.complexity)}};
    if (im.density_file) ji["density_file"] = im.density_file->generic_string();
    doc["images"].push_back(std::move(ji));
  }
  doc["models"] = json::array();
  for (const ModelEntry& me : m.models) {
    json maps = json::object();
    for (const auto& [id, p] : me.maps) maps[id] = p.generic_string();
    doc["models"].push_back({{"model_id", me.model_id}, {"maps", maps}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace saleval
