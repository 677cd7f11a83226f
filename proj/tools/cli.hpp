#pragma once

// The `saleval` command line: evaluate, aggregate, rank, synth, validate.

#include <iosfwd>

namespace saleval::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;      // bad flags, missing inputs, --strict with missing scores
inline constexpr int kExitInternal = 2;  // unexpected failure, failed oracle suite

/// Environment variable consulted for the default output directory.
inline constexpr const char* kOutputDirEnv = "SALEVAL_OUTPUT_DIR";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saleval::cli
