#pragma once

// Report emission: per-record CSV, JSON summary with the full configuration,
// ranking and aggregate CSVs. Everything is byte-stable for a fixed input.

#include "saleval/harness/protocol.hpp"
#include "saleval/harness/stats.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace saleval {

inline constexpr std::string_view kRecordsHeader =
    "model,image,metric,score,blur_sigma,distortion_type,distortion_level,complexity,seed_digest";

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);
/// 16 lowercase hex digits.
std::string format_digest(std::uint64_t d);

/// RFC 4180 field quoting (only when needed).
std::string csv_field(std::string_view s);
/// Splits one CSV record; handles quoted fields with embedded commas, quotes
/// and line breaks. Returns false at end of input.
bool read_csv_row(std::istream& in, std::vector<std::string>& fields);

void write_records_csv(std::ostream& out, std::span<const EvaluationRecord> records);
class RecordsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse of write_records_csv; throws RecordsFormatError naming the line on
/// malformed input.
std::vector<EvaluationRecord> read_records_csv(std::istream& in);
std::vector<EvaluationRecord> read_records_csv(const std::filesystem::path& path);

void write_aggregates_csv(std::ostream& out, const AggregateTable& table);
void write_rankings_csv(std::ostream& out, const RankingTable& table);

struct ReportFiles {
  std::filesystem::path records;     // records.csv
  std::filesystem::path summary;     // summary.json
  std::filesystem::path rankings;    // rankings.csv
  std::filesystem::path aggregates;  // aggregates.csv
};

/// Writes records.csv, summary.json, rankings.csv and aggregates.csv into
/// `out_dir`. Aggregation groups by (distortion type, level). Throws
/// std::invalid_argument on an empty record set and IoError with the path on
/// write failures.
ReportFiles emit_report(std::span<const EvaluationRecord> records, std::span<const std::string> errors,
                        const EvaluationConfig& cfg, const std::filesystem::path& out_dir);

/// The summary document as a string (what emit_report writes).
std::string summary_json(std::span<const EvaluationRecord> records, std::span<const std::string> errors,
                         const EvaluationConfig& cfg);

}  // namespace saleval
