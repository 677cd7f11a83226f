#pragma once

// Distortion-stratified aggregation, model rankings, Kendall's coefficient of
// concordance and the normalized standard-deviation tables.

#include "saleval/harness/protocol.hpp"

#include <Eigen/Core>

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace saleval {

enum class GroupBy {
  type_level,        // "<distortion_type>/<distortion_level>"
  complexity_level,  // "<complexity>/<distortion_level>"
  dataset,           // "all"
};

std::string stratum_of(const EvaluationRecord& r, GroupBy group);

struct AggregateRow {
  std::string model_id;
  std::string metric_id;
  std::string stratum;
  double mean = 0.0;
  int count = 0;    // present scores
  int missing = 0;  // missing scores
};

struct AggregateTable {
  std::vector<AggregateRow> rows;  // sorted by (metric, stratum, model)
  std::vector<std::string> warnings;
};

/// Mean of present scores per (model, metric, stratum); images are weighted
/// equally. Strata with no present score are omitted with a warning.
AggregateTable aggregate_scores(std::span<const EvaluationRecord> records, GroupBy group);

struct RankingEntry {
  std::string model_id;
  double mean = 0.0;
  bool tied = false;  // equal mean to a neighbour; order then follows model_id
};

/// Per (metric, stratum): models ordered by descending mean score.
using RankingTable = std::map<std::pair<std::string, std::string>, std::vector<RankingEntry>>;

RankingTable rank_models(const AggregateTable& table);

/// Fractional ranks (1 = highest score); tied scores share their average rank.
Eigen::VectorXd ranks_from_scores(std::span<const double> scores);

/// Kendall's W for an m x n matrix of ranks (m rankings of n objects) with
/// the tie correction W = 12 S / (m^2 (n^3 - n) - m T).
double kendalls_w(const Eigen::MatrixXd& rankings);

enum class StdAxis {
  levels,  // one row per distortion level; spread across distortion types
  types,   // one row per distortion type; spread across distortion levels
};

struct StdTable {
  std::vector<std::string> rows;     // level or type names
  std::vector<std::string> metrics;  // column order
  Eigen::MatrixXd values;            // rows x metrics
};

/// For each row stratum and metric: stratum-mean scores of every model are
/// divided by the largest |mean| of that metric over the complementary axis
/// (all models), the per-model population standard deviation across the
/// complementary axis is taken, and the result is averaged over models.
StdTable normalized_std_table(std::span<const EvaluationRecord> records, StdAxis axis);

}  // namespace saleval
