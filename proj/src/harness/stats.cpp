#include "saleval/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace saleval {

std::string stratum_of(const EvaluationRecord& r, GroupBy group) {
  switch (group) {
    case GroupBy::type_level:
      return std::string(to_string(r.distortion_type)) + "/" + std::string(to_string(r.distortion_level));
    case GroupBy::complexity_level:
      return std::string(to_string(r.complexity)) + "/" + std::string(to_string(r.distortion_level));
    case GroupBy::dataset: return "all";
  }
  return "all";
}

AggregateTable aggregate_scores(std::span<const EvaluationRecord> records, GroupBy group) {
  if (records.empty()) throw std::invalid_argument("aggregate_scores: no records");
  struct Acc {
    double sum = 0.0;
    int count = 0;
    int missing = 0;
  };
  // Key order (metric, stratum, model) gives the output order. Summation runs
  // over records sorted by image id so the result is independent of input order.
  std::vector<const EvaluationRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    return std::tie(a->model_id, a->metric_id, a->image_id, a->score) <
           std::tie(b->model_id, b->metric_id, b->image_id, b->score);
  });

  std::map<std::tuple<std::string, std::string, std::string>, Acc> acc;
  for (const EvaluationRecord* r : sorted) {
    Acc& a = acc[{r->metric_id, stratum_of(*r, group), r->model_id}];
    if (r->score) {
      a.sum += *r->score;
      ++a.count;
    } else {
      ++a.missing;
    }
  }

  AggregateTable out;
  for (const auto& [key, a] : acc) {
    const auto& [metric, stratum, model] = key;
    if (a.count == 0) {
      out.warnings.push_back("stratum '" + stratum + "' has no scores for model '" + model + "', metric '" + metric +
                             "' (" + std::to_string(a.missing) + " missing); omitted");
      continue;
    }
    out.rows.push_back({model, metric, stratum, a.sum / a.count, a.count, a.missing});
  }
  return out;
}

RankingTable rank_models(const AggregateTable& table) {
  RankingTable out;
  for (const AggregateRow& row : table.rows) out[{row.metric_id, row.stratum}].push_back({row.model_id, row.mean, false});
  for (auto& [key, entries] : out) {
    std::sort(entries.begin(), entries.end(), [](const RankingEntry& a, const RankingEntry& b) {
      return a.mean != b.mean ? a.mean > b.mean : a.model_id < b.model_id;
    });
    for (std::size_t i = 1; i < entries.size(); ++i)
      if (entries[i].mean == entries[i - 1].mean) entries[i].tied = entries[i - 1].tied = true;
  }
  return out;
}

Eigen::VectorXd ranks_from_scores(std::span<const double> scores) {
  const auto n = static_cast<Eigen::Index>(scores.size());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  Eigen::VectorXd ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && scores[static_cast<std::size_t>(order[static_cast<std::size_t>(j + 1)])] ==
                            scores[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
      ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[static_cast<std::size_t>(k)]) = shared;
    i = j + 1;
  }
  return ranks;
}

double kendalls_w(const Eigen::MatrixXd& rankings) {
  const auto m = static_cast<double>(rankings.rows());
  const auto n = static_cast<double>(rankings.cols());
  if (rankings.rows() < 2 || rankings.cols() < 2) throw std::invalid_argument("kendalls_w: need m >= 2 rankings of n >= 2 objects");
  if (!rankings.allFinite()) throw std::invalid_argument("kendalls_w: incomplete ranking (non-finite rank)");

  double tie_sum = 0.0;
  for (Eigen::Index r = 0; r < rankings.rows(); ++r) {
    const Eigen::VectorXd row = rankings.row(r).transpose();
    if ((row.array() < 1.0).any() || (row.array() > n).any() ||
        std::abs(row.sum() - n * (n + 1) / 2.0) > 1e-9 * n * n)
      throw std::invalid_argument("kendalls_w: ranking " + std::to_string(r) + " is not a complete ranking of " +
                                  std::to_string(rankings.cols()) + " objects");
    std::map<double, int> groups;
    for (Eigen::Index j = 0; j < row.size(); ++j) ++groups[row(j)];
    for (const auto& [rank, t] : groups) tie_sum += static_cast<double>(t) * t * t - t;
  }

  const Eigen::VectorXd totals = rankings.colwise().sum().transpose();
  const double s = (totals.array() - totals.mean()).square().sum();
  const double denom = m * m * (n * n * n - n) - m * tie_sum;
  if (denom <= 0.0) return 1.0;  // every ranking is a single tie group: trivially concordant
  return std::clamp(12.0 * s / denom, 0.0, 1.0);
}

StdTable normalized_std_table(std::span<const EvaluationRecord> records, StdAxis axis) {
  // Stratum means per (metric, row stratum, model, column stratum).
  struct Acc {
    double sum = 0.0;
    int n = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string, std::string>, Acc> acc;
  std::set<std::string> metrics;
  std::map<std::string, std::set<std::string>> columns_per_row;
  for (const EvaluationRecord& r : records) {
    if (!r.score) continue;
    const std::string type(to_string(r.distortion_type));
    const std::string level(to_string(r.distortion_level));
    const std::string& row = axis == StdAxis::levels ? level : type;
    const std::string& col = axis == StdAxis::levels ? type : level;
    Acc& a = acc[{r.metric_id, row, r.model_id, col}];
    a.sum += *r.score;
    ++a.n;
    metrics.insert(r.metric_id);
    columns_per_row[row].insert(col);
  }
  if (columns_per_row.empty()) throw std::invalid_argument("normalized_std_table: no scored records");
  for (const auto& [row, cols] : columns_per_row)
    if (cols.size() < 2)
      throw std::invalid_argument("normalized_std_table: stratum '" + row + "' spans a single " +
                                  (axis == StdAxis::levels ? "distortion type" : "distortion level"));

  StdTable out;
  out.metrics.assign(metrics.begin(), metrics.end());
  for (const auto& [row, cols] : columns_per_row) out.rows.push_back(row);
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out.rows.size()), static_cast<Eigen::Index>(out.metrics.size()));

  for (std::size_t ri = 0; ri < out.rows.size(); ++ri) {
    for (std::size_t mi = 0; mi < out.metrics.size(); ++mi) {
      // model -> means across the complementary axis
      std::map<std::string, std::vector<double>> per_model;
      double scale = 0.0;
      for (const auto& [key, a] : acc) {
        const auto& [metric, row, model, col] = key;
        if (metric != out.metrics[mi] || row != out.rows[ri]) continue;
        const double mean = a.sum / a.n;
        per_model[model].push_back(mean);
        scale = std::max(scale, std::abs(mean));
      }
      double total = 0.0;
      int models = 0;
      for (const auto& [model, means] : per_model) {
        if (means.size() < 2) continue;
        Eigen::ArrayXd v = Eigen::Map<const Eigen::ArrayXd>(means.data(), static_cast<Eigen::Index>(means.size()));
        if (scale > 0.0) v /= scale;
        total += std::sqrt((v - v.mean()).square().mean());
        ++models;
      }
      out.values(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(mi)) = models > 0 ? total / models : 0.0;
    }
  }
  return out;
}

}  // namespace saleval
