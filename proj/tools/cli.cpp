#include "cli.hpp"

#include "saleval/harness/manifest.hpp"
#include "saleval/harness/protocol.hpp"
#include "saleval/harness/report.hpp"
#include "saleval/harness/selfcheck.hpp"
#include "saleval/harness/stats.hpp"
#include "saleval/harness/synth.hpp"
#include "saleval/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace saleval::cli {

namespace {

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? env : "saleval-out";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_sweep(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UserError("--blur-sweep: bad value '" + item + "'");
    }
  }
  return out;
}

std::vector<Metric> parse_metrics(const std::string& s) {
  if (s == "shuffled") return {kShuffledMetrics.begin(), kShuffledMetrics.end()};
  if (s == "all") return {kAllMetrics.begin(), kAllMetrics.end()};
  std::vector<Metric> out;
  for (const std::string& item : split_list(s)) {
    const auto m = parse_metric(item);
    if (!m) throw UserError("--metrics: unknown metric '" + item + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f.flush()) throw IoError("write failed for '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

std::string std_table_csv(const StdTable& t) {
  std::ostringstream os;
  os << "stratum";
  for (const std::string& m : t.metrics) os << ',' << m;
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << csv_field(t.rows[r]);
    for (std::size_t c = 0; c < t.metrics.size(); ++c)
      os << ',' << format_number(t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    os << '\n';
  }
  return os.str();
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string manifest;
  std::string out;
  std::uint64_t seed = 0;
  int trials = 100;
  int samples = 0;
  int bins = 16;
  double epsilon = 1e-12;
  double saturation = 5.0;
  std::string sweep = "0,1,2,4,8,16,24,32";
  std::string metrics = "shuffled";
  int sim_bins = 256;
  int jobs = 1;
  bool strict = false;
  std::string sign = "per-trial";
};

int do_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  EvaluationConfig cfg;
  cfg.plan.num_trials = a.trials;
  cfg.plan.samples_per_trial = a.samples;
  cfg.plan.master_seed = a.seed;
  cfg.histogram.bins = a.bins;
  cfg.histogram.epsilon = a.epsilon;
  cfg.histogram.ground.saturation = a.saturation;
  cfg.histogram.sign_mode = a.sign == "aggregate" ? SignMode::aggregate : SignMode::per_trial;
  cfg.blur_sweep = parse_sweep(a.sweep);
  cfg.metrics = parse_metrics(a.metrics);
  cfg.sim_bins = a.sim_bins;
  cfg.jobs = a.jobs;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UserError(e.what());
  }

  const DatasetManifest manifest = load_manifest(a.manifest);
  const BatchResult batch = evaluate_dataset(manifest, cfg);
  const ReportFiles files = emit_report(batch.records, batch.errors, cfg, a.out);

  out << "evaluated " << manifest.models.size() << " model(s) x " << manifest.images.size() << " image(s): "
      << batch.records.size() << " records, " << batch.missing << " missing\n";
  for (const std::string& e : batch.errors) err << "warning: " << e << '\n';
  out << "wrote " << files.records.string() << ", " << files.summary.string() << ", " << files.rankings.string()
      << ", " << files.aggregates.string() << '\n';
  if (a.strict && batch.missing > 0) {
    err << "error: " << batch.missing << " missing score(s) under --strict\n";
    return kExitUser;
  }
  return kExitOk;
}

// --- aggregate ----------------------------------------------------------------

int do_aggregate(const std::string& records_path, const std::string& out_dir, const std::string& group,
                 std::ostream& out, std::ostream& err) {
  const GroupBy g = group == "dataset"            ? GroupBy::dataset
                    : group == "complexity-level" ? GroupBy::complexity_level
                                                  : GroupBy::type_level;
  const std::vector<EvaluationRecord> records = read_records_csv(std::filesystem::path(records_path));
  if (records.empty()) throw UserError("'" + records_path + "' holds no records");
  ensure_dir(out_dir);
  const AggregateTable table = aggregate_scores(records, g);
  for (const std::string& w : table.warnings) err << "warning: " << w << '\n';
  std::ostringstream agg, rank;
  write_aggregates_csv(agg, table);
  write_rankings_csv(rank, rank_models(table));
  const std::filesystem::path dir(out_dir);
  write_text(dir / "aggregates.csv", agg.str());
  write_text(dir / "rankings.csv", rank.str());
  out << "wrote " << (dir / "aggregates.csv").string() << ", " << (dir / "rankings.csv").string() << '\n';
  for (const auto& [axis, name] : {std::pair{StdAxis::levels, "std_levels.csv"}, std::pair{StdAxis::types, "std_types.csv"}}) {
    try {
      write_text(dir / name, std_table_csv(normalized_std_table(records, axis)));
      out << "wrote " << (dir / name).string() << '\n';
    } catch (const std::invalid_argument& e) {
      out << "skipped " << name << ": " << e.what() << '\n';
    }
  }
  return kExitOk;
}

// --- rank ---------------------------------------------------------------------

int do_rank(const std::vector<std::string>& record_sets, const std::string& out_dir, std::ostream& out,
            std::ostream& err) {
  // metric -> set -> model -> dataset-level mean
  std::map<std::string, std::vector<std::map<std::string, double>>> means;
  std::ostringstream rank_csv;
  rank_csv << "set,metric,rank,model,mean,tied\n";
  for (std::size_t s = 0; s < record_sets.size(); ++s) {
    const auto records = read_records_csv(std::filesystem::path(record_sets[s]));
    if (records.empty()) throw UserError("'" + record_sets[s] + "' holds no records");
    const AggregateTable table = aggregate_scores(records, GroupBy::dataset);
    for (const std::string& w : table.warnings) err << "warning: " << w << '\n';
    for (const auto& [key, entries] : rank_models(table)) {
      auto& per_set = means[key.first];
      per_set.resize(record_sets.size());
      for (std::size_t i = 0; i < entries.size(); ++i) {
        per_set[s][entries[i].model_id] = entries[i].mean;
        rank_csv << csv_field(record_sets[s]) << ',' << csv_field(key.first) << ',' << i + 1 << ','
                 << csv_field(entries[i].model_id) << ',' << format_number(entries[i].mean) << ','
                 << (entries[i].tied ? "true" : "false") << '\n';
      }
    }
  }

  std::ostringstream w_csv;
  w_csv << "metric,sets,models,kendalls_w\n";
  for (const auto& [metric, per_set] : means) {
    // Models ranked in every set.
    std::set<std::string> common;
    for (const auto& [model, v] : per_set.front()) common.insert(model);
    for (const auto& m : per_set)
      for (auto it = common.begin(); it != common.end();) it = m.count(*it) ? std::next(it) : common.erase(it);
    const std::vector<std::string> models(common.begin(), common.end());
    if (record_sets.size() < 2 || models.size() < 2) {
      err << "warning: " << metric << ": need >= 2 record sets sharing >= 2 models for Kendall's W\n";
      w_csv << csv_field(metric) << ',' << record_sets.size() << ',' << models.size() << ",\n";
      continue;
    }
    Eigen::MatrixXd ranks(static_cast<Eigen::Index>(per_set.size()), static_cast<Eigen::Index>(models.size()));
    for (std::size_t s = 0; s < per_set.size(); ++s) {
      std::vector<double> scores;
      for (const std::string& m : models) scores.push_back(per_set[s].at(m));
      ranks.row(static_cast<Eigen::Index>(s)) = ranks_from_scores(scores).transpose();
    }
    const double w = kendalls_w(ranks);
    w_csv << csv_field(metric) << ',' << per_set.size() << ',' << models.size() << ',' << format_number(w) << '\n';
    out << metric << ": W = " << format_number(w) << '\n';
  }

  ensure_dir(out_dir);
  const std::filesystem::path dir(out_dir);
  write_text(dir / "rankings.csv", rank_csv.str());
  write_text(dir / "concordance.csv", w_csv.str());
  out << "wrote " << (dir / "rankings.csv").string() << ", " << (dir / "concordance.csv").string() << '\n';
  return kExitOk;
}

// --- synth --------------------------------------------------------------------

int do_synth(SynthSpec spec, const std::string& model, const std::string& out_dir, std::ostream& out) {
  const auto fm = parse_fixation_model(model);
  if (!fm) throw UserError("--fixation-model: expected center-biased or off-center-blobs");
  spec.fixation_model = *fm;
  try {
    generate_synthetic(spec);  // argument validation before touching the disk
  } catch (const std::invalid_argument& e) {
    throw UserError(e.what());
  }
  const DatasetManifest m = synth_dataset(spec, out_dir);
  out << "wrote " << m.images.size() << " image(s), " << m.models.size() << " model(s) to "
      << (std::filesystem::path(out_dir) / "manifest.json").string() << '\n';
  return kExitOk;
}

// --- validate -----------------------------------------------------------------

int do_validate(std::uint64_t seed, std::ostream& out) {
  bool all = true;
  for (const CheckResult& r : run_oracle_suites(seed)) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << format_number(std::round(r.seconds * 1000) / 1000) << " s]\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitInternal;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shuffled saliency-metric evaluation", "saleval"};
  app.require_subcommand(1);
  const std::string out_default = default_output_dir();
  const std::string out_help = std::string("output directory (default: $") + kOutputDirEnv + " or saleval-out)";

  EvaluateArgs ev;
  ev.out = out_default;
  auto* evaluate = app.add_subcommand("evaluate", "score every model map of a manifest and write a report");
  evaluate->add_option("--manifest", ev.manifest, "dataset manifest (JSON)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev.out, out_help);
  evaluate->add_option("--seed", ev.seed, "master seed")->capture_default_str();
  evaluate->add_option("--trials", ev.trials, "shuffle trials per metric")->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_option("--samples", ev.samples, "negatives per trial (0 = fixation count)")->capture_default_str();
  evaluate->add_option("--bins", ev.bins, "histogram bins")->capture_default_str();
  evaluate->add_option("--epsilon", ev.epsilon, "KLD smoothing constant")->capture_default_str();
  evaluate->add_option("--emd-saturation", ev.saturation, "EMD ground-distance saturation")->capture_default_str();
  evaluate->add_option("--blur-sweep", ev.sweep, "comma-separated blur sigmas in pixels")->capture_default_str();
  evaluate->add_option("--metrics", ev.metrics, "comma-separated metric ids, 'shuffled' or 'all'")->capture_default_str();
  evaluate->add_option("--sim-bins", ev.sim_bins, "SIM histogram bins")->capture_default_str();
  evaluate->add_option("--jobs", ev.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_flag("--strict", ev.strict, "fail when any score is missing");
  evaluate->add_option("--sskld-sign", ev.sign, "SSKLD sign source")
      ->capture_default_str()
      ->check(CLI::IsMember({"per-trial", "aggregate"}));

  std::string agg_records, agg_out = out_default, agg_group = "type-level";
  auto* aggregate = app.add_subcommand("aggregate", "stratum means, rankings and std tables from a records CSV");
  aggregate->add_option("--records", agg_records, "records.csv from evaluate")->required()->check(CLI::ExistingFile);
  aggregate->add_option("--out", agg_out, out_help);
  aggregate->add_option("--group-by", agg_group, "stratification")
      ->capture_default_str()
      ->check(CLI::IsMember({"type-level", "complexity-level", "dataset"}));

  std::vector<std::string> rank_records;
  std::string rank_out = out_default;
  auto* rank = app.add_subcommand("rank", "per-metric model rankings and Kendall's W across record sets");
  rank->add_option("--records", rank_records, "records.csv per dataset (repeatable)")->required()->check(CLI::ExistingFile);
  rank->add_option("--out", rank_out, out_help);

  SynthSpec spec;
  std::string synth_out = out_default, synth_model = "center-biased";
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset and manifest");
  synth->add_option("--out", synth_out, out_help);
  synth->add_option("--images", spec.num_images, "image count")->capture_default_str();
  synth->add_option("--width", spec.frame.width, "frame width")->capture_default_str();
  synth->add_option("--height", spec.frame.height, "frame height")->capture_default_str();
  synth->add_option("--fixation-model", synth_model, "center-biased | off-center-blobs")->capture_default_str();
  synth->add_option("--fixations", spec.fixations_per_image, "fixations per image")->capture_default_str();
  synth->add_option("--seed", spec.seed, "generator seed")->capture_default_str();
  synth->add_option("--ppd", spec.pixels_per_degree, "pixels per degree (density FWHM)")->capture_default_str();
  synth->add_flag("--distortion-layout", spec.distortion_layout, "tag images with distortion type/level strata");
  synth->add_flag("--with-models", spec.with_models, "also write synthetic model maps");

  std::uint64_t validate_seed = 0;
  auto* validate = app.add_subcommand("validate", "run the oracle suites and print pass/fail");
  validate->add_option("--seed", validate_seed, "seed for the random cases")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    if (code != 0) err << app.help();
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*evaluate) return do_evaluate(ev, out, err);
    if (*aggregate) return do_aggregate(agg_records, agg_out, agg_group, out, err);
    if (*rank) return do_rank(rank_records, rank_out, out, err);
    if (*synth) return do_synth(spec, synth_model, synth_out, out);
    if (*validate) return do_validate(validate_seed, out);
  } catch (const UserError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const LoadError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const RecordsFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace saleval::cli
