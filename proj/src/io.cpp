#include "saleval/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace saleval {

namespace {

std::string describe(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

/// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in, const std::filesystem::path& path) {
  std::string tok;
  for (;;) {
    int c = in.get();
    if (c == EOF) throw IoError("pgm " + describe(path) + ": truncated header");
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
}

int header_int(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = header_token(in, path);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v <= 0)
    throw IoError("pgm " + describe(path) + ": bad header value '" + tok + "'");
  return v;
}

bool parse_pair(std::string_view line, int& a, int& b) {
  const auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const auto comma = line.find(',');
  if (comma == std::string_view::npos) return false;
  const auto first = trim(line.substr(0, comma));
  const auto second = trim(line.substr(comma + 1));
  const auto r1 = std::from_chars(first.data(), first.data() + first.size(), a);
  const auto r2 = std::from_chars(second.data(), second.data() + second.size(), b);
  return r1.ec == std::errc{} && r1.ptr == first.data() + first.size() && r2.ec == std::errc{} &&
         r2.ptr == second.data() + second.size();
}

}  // namespace

SaliencyMap read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + describe(path));
  const std::string magic = header_token(in, path);
  if (magic != "P5" && magic != "P2") throw IoError("pgm " + describe(path) + ": unsupported format '" + magic + "'");
  const int width = header_int(in, path);
  const int height = header_int(in, path);
  const int maxval = header_int(in, path);
  if (maxval > 65535) throw IoError("pgm " + describe(path) + ": maxval above 65535");

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> data(count);
  if (magic == "P5") {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes_per);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw IoError("pgm " + describe(path) + ": truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned v = bytes_per == 2 ? (unsigned{raw[2 * i]} << 8) | raw[2 * i + 1] : raw[i];
      data[i] = std::min(1.0, static_cast<double>(v) / maxval);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = 0;
      if (!(in >> v) || v < 0) throw IoError("pgm " + describe(path) + ": bad ASCII pixel data");
      data[i] = std::min(1.0, static_cast<double>(v) / maxval);
    }
  }
  return SaliencyMap::from_row_major(width, height, data);
}

void write_pgm(const std::filesystem::path& path, const SaliencyMap& map, int maxval) {
  if (maxval < 1 || maxval > 65535) throw std::invalid_argument("write_pgm: maxval must be in [1, 65535]");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + describe(path));
  out << "P5\n" << map.width() << " " << map.height() << "\n" << maxval << "\n";
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<std::size_t>(map.width()) * static_cast<std::size_t>(map.height()) * 2);
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x) {
      const auto v = static_cast<unsigned>(std::lround(std::clamp(map(x, y), 0.0, 1.0) * maxval));
      if (maxval > 255) raw.push_back(static_cast<unsigned char>(v >> 8));
      raw.push_back(static_cast<unsigned char>(v & 0xff));
    }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failed for " + describe(path));
}

FixationSet read_fixations(const std::filesystem::path& path, const std::string& image_id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + describe(path));
  FixationSet fs;
  fs.image_id = image_id;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    int a = 0, b = 0;
    if (!parse_pair(line, a, b))
      throw IoError("fixations " + describe(path) + " line " + std::to_string(lineno) + ": expected 'a,b' integers");
    if (!have_header) {
      fs.frame = {a, b};
      have_header = true;
    } else {
      fs.points.push_back({a, b});
    }
  }
  if (!have_header) throw IoError("fixations " + describe(path) + ": missing 'width,height' header");
  try {
    fs.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError("fixations " + describe(path) + ": " + e.what());
  }
  return fs;
}

void write_fixations(const std::filesystem::path& path, const FixationSet& fixations) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + describe(path));
  out << fixations.frame.width << "," << fixations.frame.height << "\n";
  for (const Point& p : fixations.points) out << p.x << "," << p.y << "\n";
  if (!out) throw IoError("write failed for " + describe(path));
}

}  // namespace saleval
