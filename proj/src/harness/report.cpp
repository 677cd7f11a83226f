#include "saleval/harness/report.hpp"

#include "saleval/io.hpp"
#include "saleval/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <set>
#include <stdexcept>

namespace saleval {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_digest(std::uint64_t d) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + 16, d, 16);
  std::string hex(buf, res.ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

bool read_csv_row(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string cur;
  bool quoted = false;
  for (int ch; (ch = in.get()) != std::char_traits<char>::eof();) {
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cur += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw RecordsFormatError("csv: unterminated quoted field");
  fields.push_back(std::move(cur));
  return true;
}

void write_records_csv(std::ostream& out, std::span<const EvaluationRecord> records) {
  out << kRecordsHeader << '\n';
  for (const EvaluationRecord& r : records) {
    out << csv_field(r.model_id) << ',' << csv_field(r.image_id) << ',' << csv_field(r.metric_id) << ','
        << (r.score ? format_number(*r.score) : std::string()) << ',' << format_number(r.blur_sigma) << ','
        << to_string(r.distortion_type) << ',' << to_string(r.distortion_level) << ',' << to_string(r.complexity)
        << ',' << format_digest(r.trial_plan_digest) << '\n';
  }
}

namespace {

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw RecordsFormatError("records csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

template <typename T>
T require(std::optional<T> v, const std::string& field, std::size_t line) {
  if (!v) throw RecordsFormatError("records csv line " + std::to_string(line) + ": bad value '" + field + "'");
  return *v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<EvaluationRecord> read_records_csv(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_row(in, fields)) throw RecordsFormatError("records csv: empty input");
  std::string header;
  for (std::size_t i = 0; i < fields.size(); ++i) header += (i ? "," : "") + fields[i];
  if (header != kRecordsHeader) throw RecordsFormatError("records csv: unexpected header '" + header + "'");

  std::vector<EvaluationRecord> out;
  for (std::size_t line = 2; read_csv_row(in, fields); ++line) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 9)
      throw RecordsFormatError("records csv line " + std::to_string(line) + ": expected 9 fields, got " +
                               std::to_string(fields.size()));
    EvaluationRecord r;
    r.model_id = fields[0];
    r.image_id = fields[1];
    r.metric_id = fields[2];
    if (!fields[3].empty()) r.score = parse_double(fields[3], line);
    r.blur_sigma = parse_double(fields[4], line);
    r.distortion_type = require(parse_distortion_type(fields[5]), fields[5], line);
    r.distortion_level = require(parse_distortion_level(fields[6]), fields[6], line);
    r.complexity = require(parse_complexity(fields[7]), fields[7], line);
    const std::string& d = fields[8];
    const auto res = std::from_chars(d.data(), d.data() + d.size(), r.trial_plan_digest, 16);
    if (d.size() != 16 || res.ec != std::errc{} || res.ptr != d.data() + d.size())
      throw RecordsFormatError("records csv line " + std::to_string(line) + ": bad seed digest '" + d + "'");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EvaluationRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  try {
    return read_records_csv(f);
  } catch (const std::runtime_error& e) {
    throw RecordsFormatError(path.string() + ": " + e.what());
  }
}

void write_aggregates_csv(std::ostream& out, const AggregateTable& table) {
  out << "metric,stratum,model,mean,count,missing\n";
  for (const AggregateRow& r : table.rows)
    out << csv_field(r.metric_id) << ',' << csv_field(r.stratum) << ',' << csv_field(r.model_id) << ','
        << format_number(r.mean) << ',' << r.count << ',' << r.missing << '\n';
}

void write_rankings_csv(std::ostream& out, const RankingTable& table) {
  out << "metric,stratum,rank,model,mean,tied\n";
  for (const auto& [key, entries] : table)
    for (std::size_t i = 0; i < entries.size(); ++i)
      out << csv_field(key.first) << ',' << csv_field(key.second) << ',' << i + 1 << ','
          << csv_field(entries[i].model_id) << ',' << format_number(entries[i].mean) << ','
          << (entries[i].tied ? "true" : "false") << '\n';
}

std::string summary_json(std::span<const EvaluationRecord> records, std::span<const std::string> errors,
                         const EvaluationConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json config;
  config["bins"] = cfg.histogram.bins;
  config["epsilon"] = cfg.histogram.epsilon;
  config["emd_saturation"] = cfg.histogram.ground.saturation;
  config["blur_sweep"] = cfg.blur_sweep;
  config["trials"] = cfg.plan.num_trials;
  config["samples_per_trial"] = cfg.plan.samples_per_trial;
  config["master_seed"] = cfg.plan.master_seed;
  config["rng"] = std::string(kRngAlgorithm);
  config["seed_derivation"] = std::string(kSeedDerivation);
  ordered_json metrics = ordered_json::array();
  for (Metric m : cfg.metrics) metrics.push_back(std::string(metric_name(m)));
  config["metrics"] = metrics;
  config["sskld_sign"] = cfg.histogram.sign_mode == SignMode::per_trial ? "per-trial" : "aggregate";
  config["sim_bins"] = cfg.sim_bins;

  std::map<std::string, std::pair<int, int>> per_metric;  // present, missing
  std::set<std::string> models, images;
  for (const EvaluationRecord& r : records) {
    auto& [present, missing] = per_metric[r.metric_id];
    ++(r.score ? present : missing);
    models.insert(r.model_id);
    images.insert(r.image_id);
  }
  ordered_json counts;
  counts["records"] = records.size();
  counts["models"] = models.size();
  counts["images"] = images.size();
  ordered_json pm = ordered_json::object();
  std::size_t missing_total = 0;
  for (const auto& [metric, c] : per_metric) {
    pm[metric] = {{"present", c.first}, {"missing", c.second}};
    missing_total += static_cast<std::size_t>(c.second);
  }
  counts["missing"] = missing_total;
  counts["per_metric"] = pm;

  ordered_json doc;
  doc["config"] = config;
  doc["counts"] = counts;
  doc["errors"] = std::vector<std::string>(errors.begin(), errors.end());
  return doc.dump(2) + "\n";
}

ReportFiles emit_report(std::span<const EvaluationRecord> records, std::span<const std::string> errors,
                        const EvaluationConfig& cfg, const std::filesystem::path& out_dir) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records to report");
  std::vector<EvaluationRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(), record_less);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  ReportFiles files{out_dir / "records.csv", out_dir / "summary.json", out_dir / "rankings.csv",
                    out_dir / "aggregates.csv"};
  std::ostringstream rec, agg, rank;
  write_records_csv(rec, sorted);
  const AggregateTable table = aggregate_scores(sorted, GroupBy::type_level);
  write_aggregates_csv(agg, table);
  write_rankings_csv(rank, rank_models(table));

  write_file(files.records, rec.str());
  write_file(files.summary, summary_json(sorted, errors, cfg));
  write_file(files.rankings, rank.str());
  write_file(files.aggregates, agg.str());
  return files;
}

}  // namespace saleval
