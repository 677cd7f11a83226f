#pragma once

#include "saleval/types.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace saleval {

/// File could not be read, parsed or written. The message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an 8- or 16-bit portable graymap (P5 binary or P2 ASCII); values
/// are divided by the file's maxval.
SaliencyMap read_pgm(const std::filesystem::path& path);

/// Writes a binary P5 graymap. Values are clamped to [0, 1] and scaled to
/// `maxval` (255 for 8-bit, up to 65535 for 16-bit output).
void write_pgm(const std::filesystem::path& path, const SaliencyMap& map, int maxval = 65535);

/// Fixation text file: a `width,height` header line, then one `x,y` integer
/// pair per line. The image id is taken from the caller.
FixationSet read_fixations(const std::filesystem::path& path, const std::string& image_id);
void write_fixations(const std::filesystem::path& path, const FixationSet& fixations);

}  // namespace saleval
