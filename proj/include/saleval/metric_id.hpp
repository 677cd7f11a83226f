#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace saleval {

enum class Metric { sauc, snss, sskld, sjsd, semd, cc, sim, nss, auc_f, auc_s, skld };

inline constexpr std::array<Metric, 11> kAllMetrics{Metric::sauc, Metric::snss, Metric::sskld, Metric::sjsd,
                                                    Metric::semd, Metric::cc,   Metric::sim,   Metric::nss,
                                                    Metric::auc_f, Metric::auc_s, Metric::skld};
/// The shuffled metrics evaluated by default.
inline constexpr std::array<Metric, 5> kShuffledMetrics{Metric::sauc, Metric::snss, Metric::sskld, Metric::sjsd,
                                                        Metric::semd};

constexpr std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::sauc: return "sauc";
    case Metric::snss: return "snss";
    case Metric::sskld: return "sskld";
    case Metric::sjsd: return "sjsd";
    case Metric::semd: return "semd";
    case Metric::cc: return "cc";
    case Metric::sim: return "sim";
    case Metric::nss: return "nss";
    case Metric::auc_f: return "auc_f";
    case Metric::auc_s: return "auc_s";
    case Metric::skld: return "skld";
  }
  return "unknown";
}

constexpr std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (metric_name(m) == name) return m;
  return std::nullopt;
}

}  // namespace saleval
