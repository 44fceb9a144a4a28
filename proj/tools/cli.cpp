#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "sarve/community_detect.hpp"
#include "sarve/context_match.hpp"
#include "sarve/dataset_gen.hpp"
#include "sarve/dataset_io.hpp"
#include "sarve/evaluation.hpp"
#include "sarve/version.hpp"

namespace sarve::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string subcommand;
  std::string dataset;
  std::string out_dir;
  double gamma = 0.6;
  double beta = 0.5;
  std::string deg_cent_threshold = "median";
  int k_neighbors = 0;  // 0: all presenters
  int top_n = 10;
  int min_overlap = 2;
  std::uint64_t seed = 0;
  std::string truth = "labels";
  double train_fraction = 0.8;
  unsigned workers = 1;
  bool explain = false;

  // sweep
  std::string axis;
  std::string grid;
  bool emit_plot_data = false;

  // gen-dataset
  GeneratorSpec gen;

  Thresholds thresholds() const {
    Thresholds th;
    th.gamma = gamma;
    th.beta = beta;
    th.deg_cent_threshold = DegreeThreshold::parse(deg_cent_threshold);
    if (k_neighbors > 0) th.k_neighbors = k_neighbors;
    th.top_n = top_n;
    th.min_overlap = min_overlap;
    return th;
  }

  // Everything that determines the artifacts. The worker count and output
  // directory do not, so they are left out.
  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    j["tool_version"] = kVersion;
    if (subcommand == "gen-dataset") {
      j["seed"] = seed;
      j["generator"] = {
          {"n_presenters", gen.n_presenters},
          {"n_participants", gen.n_participants},
          {"contacts_per_presenter", gen.contacts_per_presenter},
          {"duration_range", {gen.duration_range.lo, gen.duration_range.hi}},
          {"frequency_range", {gen.frequency_range.lo, gen.frequency_range.hi}},
          {"rating_range", {gen.rating_range.lo, gen.rating_range.hi}},
          {"t_total", gen.t_total},
          {"rooms", gen.rooms},
          {"talk_minutes", gen.talk_minutes},
          {"question_minutes", gen.question_minutes},
          {"n_interest_clusters", gen.n_interest_clusters},
          {"n_items", gen.n_items},
          {"participant_tags", {gen.participant_tags.lo, gen.participant_tags.hi}},
          {"presenter_tags", {gen.presenter_tags.lo, gen.presenter_tags.hi}},
          {"within_cluster_contact_bias", gen.within_cluster_contact_bias},
      };
      return j;
    }
    j["dataset"] = dataset;
    if (subcommand == "summarize") return j;
    j["gamma"] = gamma;
    j["beta"] = beta;
    j["deg_cent_threshold"] = deg_cent_threshold;
    j["k_neighbors"] = k_neighbors > 0 ? json(k_neighbors) : json("all");
    j["top_n"] = top_n;
    j["min_overlap"] = min_overlap;
    if (subcommand == "recommend") {
      j["explain"] = explain;
      return j;
    }
    j["seed"] = seed;
    j["truth"] = truth;
    j["train_fraction"] = train_fraction;
    if (subcommand == "sweep") {
      j["axis"] = axis;
      j["grid"] = grid;
      j["emit_plot_data"] = emit_plot_data;
    }
    return j;
  }

  std::string header() const { return "# config " + to_json().dump() + "\n"; }
};

class DataFailure : public std::runtime_error {
 public:
  explicit DataFailure(std::vector<std::string> lines)
      : std::runtime_error("data failure"), lines_(std::move(lines)) {}
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(fmt::format("cannot write '{}'", path.string()));
  f << content;
}

Dataset load_valid(const std::string& path) {
  Dataset d = load_dataset(path);
  const auto report = validate_dataset(d);
  if (!report.ok()) {
    std::vector<std::string> lines;
    for (const auto& v : report.violations)
      lines.push_back(fmt::format("error: {}: violates '{}' at {}", path, v.invariant, v.record));
    throw DataFailure(std::move(lines));
  }
  return d;
}

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  return dir;
}

void cmd_gen_dataset(RunConfig& cfg, std::ostream& out) {
  cfg.gen.seed = cfg.seed;
  const Dataset d = generate(cfg.gen);
  const auto dir = prepare_out(cfg);
  write_file(dir / "dataset.txt", cfg.header() + serialize_dataset(d));
  json prov;
  prov["tool"] = "sarve";
  prov["tool_version"] = kVersion;
  prov["seed"] = cfg.seed;
  prov["config"] = cfg.to_json();
  write_file(dir / "dataset.provenance.json", prov.dump(2) + "\n");
  out << fmt::format("wrote {} ({} persons, {} sessions)\n", (dir / "dataset.txt").string(),
                     d.persons.size(), d.sessions.size());
}

void cmd_recommend(const RunConfig& cfg, std::ostream& out) {
  const Dataset d = load_valid(cfg.dataset);
  const Thresholds th = cfg.thresholds();
  SarveOptions opts;
  opts.workers = cfg.workers;
  const auto recs = run_sarve_prevalidated(d, th, opts);
  const auto dir = prepare_out(cfg);
  write_file(dir / "recommendations.tsv", cfg.header() + serialize_recommendations(recs));
  write_file(dir / "schedule.tsv",
             cfg.header() + serialize_schedule(resolve_conflicts(recs, d.sessions)));
  if (cfg.explain) {
    std::string text = cfg.header();
    for (const auto& r : recs.items) {
      const Session* s = d.find_session(r.session);
      text += fmt::format("{} {} {} rank {}:", r.participant.str(), r.session.str(),
                          to_string(r.stream), r.rank);
      for (const auto& e : relation_edges(d, r.presenter, r.participant, *s))
        text += " " + format_edge(e);
      text += "\n";
    }
    write_file(dir / "explanations.txt", text);
  }
  out << fmt::format("{} recommendations written to {}\n", recs.items.size(),
                     (dir / "recommendations.tsv").string());
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const Dataset d = load_valid(cfg.dataset);
  const auto report = evaluate(d, cfg.thresholds(), {cfg.train_fraction, cfg.seed},
                               parse_truth_mode(cfg.truth), cfg.workers);
  const auto dir = prepare_out(cfg);
  const std::string text = cfg.header() + format_eval_report(report);
  write_file(dir / "evaluation.tsv", text);
  out << format_eval_report(report);
}

void write_plot_data(const fs::path& dir, const RunConfig& cfg, const SweepResult& r) {
  const char* axis = to_string(r.axis);
  const char* base = r.axis == SweepAxis::gamma ? "pearson_only" : "popularity_only";
  struct Panel {
    const char* metric;
    std::optional<double> MetricPoint::*field;
  };
  const Panel panels[] = {{"precision", &MetricPoint::precision},
                          {"recall", &MetricPoint::recall},
                          {"f_measure", &MetricPoint::f_measure}};
  auto cell = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.6f}", *v) : std::string("NA");
  };
  for (const auto& panel : panels) {
    std::string text = cfg.header();
    text += fmt::format("{}\tsarve\t{}\n", axis, base);
    for (std::size_t i = 0; i < r.points.size(); ++i)
      text += fmt::format("{:.4f}\t{}\t{}\n", r.points[i].threshold,
                          cell(r.points[i].*panel.field), cell(r.baseline[i].*panel.field));
    write_file(dir / fmt::format("{}_{}.tsv", panel.metric, axis), text);
  }
}

void cmd_sweep(RunConfig& cfg, std::ostream& out) {
  const SweepAxis axis = parse_sweep_axis(cfg.axis);
  if (cfg.grid.empty()) cfg.grid = axis == SweepAxis::gamma ? "0.6:1.0:0.1" : "0.5:0.8:0.1";
  const auto grid = parse_grid(cfg.grid);
  const Thresholds th = cfg.thresholds();
  th.check();
  const TruthMode truth_mode = parse_truth_mode(cfg.truth);

  const Dataset d = load_valid(cfg.dataset);
  const auto parts = split(d, {cfg.train_fraction, cfg.seed});
  SweepOptions opts;
  opts.workers = cfg.workers;
  opts.truth = truth_mode == TruthMode::labels ? parts.test.relevance : threshold_truth(d, th);
  const auto result = sweep(parts.train, axis, grid, th, opts);

  const auto dir = prepare_out(cfg);
  std::string text = cfg.header();
  text += fmt::format("# truth {}\n", cfg.truth);
  text += format_sweep(result);
  write_file(dir / fmt::format("sweep_{}.tsv", cfg.axis), text);
  if (cfg.emit_plot_data) write_plot_data(dir, cfg, result);
  out << format_sweep(result);
}

void cmd_summarize(const RunConfig& cfg, std::ostream& out) {
  const Dataset d = load_valid(cfg.dataset);
  const auto dir = prepare_out(cfg);
  const std::string text = format_summary(summarize(d));
  write_file(dir / "summary.tsv", cfg.header() + text);
  out << text;
}

void add_threshold_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--gamma", cfg.gamma, "Pearson threshold")->capture_default_str();
  sub->add_option("--beta", cfg.beta, "tie-strength threshold")->capture_default_str();
  sub->add_option("--deg-cent-threshold", cfg.deg_cent_threshold,
                  "presenter degree threshold: median, off or an integer")
      ->capture_default_str();
  sub->add_option("--k-neighbors", cfg.k_neighbors,
                  "cap on similar presenters per participant (0 = all)")
      ->capture_default_str();
  sub->add_option("--top-n", cfg.top_n, "list length per participant and stream")
      ->capture_default_str();
  sub->add_option("--min-overlap", cfg.min_overlap, "co-rated items needed for Pearson")
      ->capture_default_str();
  sub->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
}

void add_eval_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "split seed")->capture_default_str();
  sub->add_option("--truth", cfg.truth, "ground truth: labels or thresholds")
      ->capture_default_str();
  sub->add_option("--train-fraction", cfg.train_fraction)->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv(kOutDirEnv)) cfg.out_dir = env;
  if (cfg.out_dir.empty()) cfg.out_dir = ".";

  CLI::App app{"Socially-aware conference session recommendation and evaluation", "sarve"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* gen = app.add_subcommand("gen-dataset", "generate a synthetic dataset");
  auto* rec = app.add_subcommand("recommend", "run both recommendation streams");
  auto* evl = app.add_subcommand("evaluate", "split, recommend and score");
  auto* swp = app.add_subcommand("sweep", "precision/recall/F along a threshold grid");
  auto* sum = app.add_subcommand("summarize", "histograms of durations, ratings, frequencies");

  for (auto* sub : {gen, rec, evl, swp, sum})
    sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  for (auto* sub : {rec, evl, swp, sum})
    sub->add_option("--dataset", cfg.dataset, "dataset file")->required();
  for (auto* sub : {rec, evl, swp}) add_threshold_flags(sub, cfg);
  for (auto* sub : {evl, swp}) add_eval_flags(sub, cfg);
  rec->add_flag("--explain", cfg.explain, "write relation edges for each recommendation");

  swp->add_option("--axis", cfg.axis, "gamma or beta")
      ->required()
      ->check(CLI::IsMember({"gamma", "beta"}));
  swp->add_option("--grid", cfg.grid, "start:end:step or comma list");
  swp->add_flag("--emit-plot-data", cfg.emit_plot_data, "write one precision, recall and F file each");

  gen->add_option("--seed", cfg.seed)->capture_default_str();
  gen->add_option("--presenters", cfg.gen.n_presenters)->capture_default_str();
  gen->add_option("--participants", cfg.gen.n_participants)->capture_default_str();
  gen->add_option("--contacts-per-presenter", cfg.gen.contacts_per_presenter)
      ->capture_default_str();
  gen->add_option("--clusters", cfg.gen.n_interest_clusters)->capture_default_str();
  gen->add_option("--items", cfg.gen.n_items)->capture_default_str();
  gen->add_option("--t-total", cfg.gen.t_total)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      cfg.subcommand = "gen-dataset";
      cmd_gen_dataset(cfg, out);
    } else {
      // Reject bad thresholds before touching any data.
      if (!sum->parsed()) {
        cfg.thresholds().check();
        parse_truth_mode(cfg.truth);
        if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
      }
      if (rec->parsed()) {
        cfg.subcommand = "recommend";
        cmd_recommend(cfg, out);
      } else if (evl->parsed()) {
        cfg.subcommand = "evaluate";
        cmd_evaluate(cfg, out);
      } else if (swp->parsed()) {
        cfg.subcommand = "sweep";
        cmd_sweep(cfg, out);
      } else {
        cfg.subcommand = "summarize";
        cmd_summarize(cfg, out);
      }
    }
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataFailure& e) {
    for (const auto& line : e.lines()) err << line << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace sarve::cli
