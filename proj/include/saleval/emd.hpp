#pragma once

// EMD-hat between value histograms: an exact min-cost transport of the
// smaller total mass plus a penalty for the unmatched mass.

#include "saleval/histogram.hpp"

#include <Eigen/Core>

#include <vector>

namespace saleval {

/// Ground distance |i - j| between bin indices, saturated at `saturation`.
struct GroundDistanceSpec {
  double saturation = 5.0;

  void validate() const;
  double operator()(int i, int j) const;
  /// Dense n1 x n2 ground-distance matrix.
  Eigen::MatrixXd matrix(int n1, int n2) const;
};

struct FlowSolution {
  struct Arc {
    int from;
    int to;
    double amount;
  };
  std::vector<Arc> flows;
  double cost = 0.0;
};

/// Minimum-cost transport of min(sum supply, sum demand) units from supply
/// bins to demand bins under a non-negative cost matrix (successive shortest
/// paths with Dijkstra on reduced costs).
FlowSolution min_cost_transport(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                                const Eigen::MatrixXd& cost);

double emd_hat(const Eigen::VectorXd& source, const Eigen::VectorXd& sink, const GroundDistanceSpec& d);
double emd_hat(const ValueHistogram& source, const ValueHistogram& sink, const GroundDistanceSpec& d);

/// Independent reference for emd_hat: the same transport program solved as a
/// generic linear program with a dense two-phase simplex. At most 8 bins.
double emd_brute_oracle(const Eigen::VectorXd& h1, const Eigen::VectorXd& h2, const GroundDistanceSpec& d);
double emd_brute_oracle(const ValueHistogram& h1, const ValueHistogram& h2, const GroundDistanceSpec& d);

namespace lp {

struct Result {
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// min c^T x  s.t.  A x = b, x >= 0, with b >= 0. Bland's rule, two phases.
/// Throws std::runtime_error when infeasible or unbounded.
Result solve_standard_form(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace lp

}  // namespace saleval
