#pragma once

// Oracle suites run by `saleval validate`: each compares a fast production
// routine against an independent reference on seeded random inputs.

#include <cstdint>
#include <string>
#include <vector>

namespace saleval {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// auc_of_curve(roc_from_samples) vs exact pair counting on `cases` random
/// sample sets of sizes 8..256; tolerance 0.01 when both sets hold >= 64
/// values, 0.05 otherwise.
CheckResult check_auc_oracle(std::uint64_t seed, int cases = 1000);

/// emd_hat vs the simplex LP on `cases` random histogram pairs of 1..8 bins
/// with unequal masses; tolerance 1e-9.
CheckResult check_emd_oracle(std::uint64_t seed, int cases = 1000);

/// jsd against its definition: range [0, 1], jsd(p, p) = 0, symmetry, the
/// closed form through the mixture, and the triangle inequality of sqrt(jsd)
/// over `triples` random triples.
CheckResult check_jsd_definition(std::uint64_t seed, int triples = 10000);

std::vector<CheckResult> run_oracle_suites(std::uint64_t seed);

}  // namespace saleval
