#include "sarve/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <variant>

#include <fmt/core.h>

#include "sarve/context_match.hpp"
#include "sarve/random.hpp"
#include "sarve/similarity.hpp"
#include "sarve/social_graph.hpp"

namespace sarve {

std::optional<double> f_measure(double precision, double recall) {
  if (precision + recall == 0.0) return std::nullopt;
  return 2.0 * precision * recall / (precision + recall);
}

MetricPoint metrics(const ConfusionCounts& c, double threshold) {
  MetricPoint p;
  p.threshold = threshold;
  p.counts = c;
  if (c.e + c.f > 0) p.precision = static_cast<double>(c.e) / static_cast<double>(c.e + c.f);
  if (c.e + c.g > 0) p.recall = static_cast<double>(c.e) / static_cast<double>(c.e + c.g);
  if (p.precision && p.recall) p.f_measure = f_measure(*p.precision, *p.recall);
  return p;
}

ConfusionCounts score(const PairSet& recs, const PairSet& relevant, long long universe) {
  ConfusionCounts c;
  for (const auto& pair : recs) {
    if (relevant.contains(pair))
      ++c.e;
    else
      ++c.f;
  }
  c.g = static_cast<long long>(relevant.size()) - c.e;
  c.h = universe - c.e - c.f - c.g;
  if (c.h < 0)
    throw DataError(fmt::format(
        "decision universe of {} pairs is smaller than recommended plus relevant ({})",
        universe, c.e + c.f + c.g));
  return c;
}

long long decision_universe(const Dataset& dataset) {
  return static_cast<long long>(dataset.ids_with_role(Role::participant).size()) *
         static_cast<long long>(dataset.sessions.size());
}

// ---------------------------------------------------------------------------

namespace {

using RatingRecord = std::pair<PersonId, std::size_t>;  // (person, item column)
using ContactRecord = ContactLog::Key;
using Record = std::variant<RatingRecord, ContactRecord>;

Dataset shell_of(const Dataset& d) {
  Dataset out;
  out.schema_version = d.schema_version;
  out.rooms = d.rooms;
  out.persons = d.persons;
  out.ratings = RatingMatrix(d.ratings.items());
  out.contacts = ContactLog(d.t_total());
  out.sessions = d.sessions;
  out.availability = d.availability;
  out.relevance = d.relevance;
  return out;
}

void copy_record(const Dataset& from, Dataset& to, const Record& r) {
  if (const auto* rating = std::get_if<RatingRecord>(&r)) {
    const int value = *from.ratings.row(rating->first)[rating->second];
    to.ratings.set(rating->first, from.ratings.items()[rating->second], value);
  } else {
    const auto& key = std::get<ContactRecord>(r);
    to.contacts.set(key.first, key.second, *from.contacts.find(key.first, key.second));
  }
}

}  // namespace

SplitResult split(const Dataset& dataset, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ConfigError(
        fmt::format("train fraction must lie in (0, 1), got {}", spec.train_fraction));

  const auto participants = dataset.ids_with_role(Role::participant);
  const std::set<PersonId> participant_set(participants.begin(), participants.end());

  std::map<PersonId, std::vector<Record>> by_participant;
  std::vector<Record> always_train;
  for (const auto& [person, row] : dataset.ratings.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i]) continue;
      if (participant_set.contains(person))
        by_participant[person].push_back(RatingRecord{person, i});
      else
        always_train.push_back(RatingRecord{person, i});
    }
  }
  for (const auto& [key, _] : dataset.contacts.entries()) {
    if (participant_set.contains(key.second))
      by_participant[key.second].push_back(key);
    else
      always_train.push_back(key);
  }

  SplitResult out{shell_of(dataset), shell_of(dataset)};
  for (const auto& r : always_train) copy_record(dataset, out.train, r);

  Rng rng(spec.seed);
  long long seen = 0;
  long long allocated = 0;
  for (auto& [person, records] : by_participant) {
    const auto n = static_cast<long long>(records.size());
    if (n < 2)
      throw DataError(fmt::format(
          "participant '{}' has a single record and cannot appear in both train and "
          "test",
          person.str()));
    rng.shuffle(records);
    seen += n;
    const long long target = std::llround(spec.train_fraction * static_cast<double>(seen));
    const long long take = std::clamp(target - allocated, 1LL, n - 1);
    allocated += take;

    auto is_rating = [](const Record& r) { return std::holds_alternative<RatingRecord>(r); };
    const auto train_end = records.begin() + take;
    if (std::none_of(records.begin(), train_end, is_rating)) {
      auto rating = std::find_if(train_end, records.end(), is_rating);
      if (rating != records.end()) std::iter_swap(records.begin(), rating);
    }
    for (auto it = records.begin(); it != records.end(); ++it)
      copy_record(dataset, it < train_end ? out.train : out.test, *it);
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(TruthMode mode) {
  return mode == TruthMode::labels ? "labels" : "thresholds";
}

TruthMode parse_truth_mode(std::string_view text) {
  if (text == "labels") return TruthMode::labels;
  if (text == "thresholds") return TruthMode::thresholds;
  throw ConfigError(fmt::format("truth mode must be 'labels' or 'thresholds', got '{}'", text));
}

PairSet threshold_truth(const Dataset& d, const Thresholds& th) {
  th.check();
  PairSet truth;
  for (const auto& x : d.ids_with_role(Role::participant)) {
    if (!d.ratings.has_row(x)) continue;
    const auto profile = d.profile_of(x);
    for (const auto& s : d.sessions) {
      if (s.presenter == x || !d.ratings.has_row(s.presenter)) continue;
      if (!passes_gamma(pearson(d.ratings, s.presenter, x, th.min_overlap), th.gamma))
        continue;
      if (!passes_beta(tie_strength(d.contacts, s.presenter, x), th.beta)) continue;
      if (match_context(profile, s).matched()) truth.emplace(x, s.id);
    }
  }
  return truth;
}

BaselineSets run_baselines(const Dataset& dataset, const Thresholds& thresholds,
                           unsigned workers) {
  const auto report = validate_dataset(dataset);
  if (!report.ok())
    throw DataError(fmt::format("refusing to run on an invalid dataset: {} ({})",
                                report.violations.front().invariant,
                                report.violations.front().record));
  SarveOptions open_context;
  open_context.context_filter = false;
  open_context.workers = workers;
  SarveOptions by_degree;
  by_degree.relations_gate = RelationsGate::popularity_only;
  by_degree.workers = workers;
  return {run_sarve_prevalidated(dataset, thresholds, open_context),
          run_sarve_prevalidated(dataset, thresholds, by_degree)};
}

// ---------------------------------------------------------------------------

const char* to_string(SweepAxis axis) { return axis == SweepAxis::gamma ? "gamma" : "beta"; }

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "gamma") return SweepAxis::gamma;
  if (text == "beta") return SweepAxis::beta;
  throw ConfigError(fmt::format("axis must be 'gamma' or 'beta', got '{}'", text));
}

SweepResult sweep(const Dataset& dataset, SweepAxis axis, std::span<const double> grid,
                  const Thresholds& thresholds, const SweepOptions& options) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw ConfigError("sweep grid must be sorted ascending");
  const auto report = validate_dataset(dataset);
  if (!report.ok())
    throw DataError(fmt::format("refusing to sweep an invalid dataset: {} ({})",
                                report.violations.front().invariant,
                                report.violations.front().record));

  const PairSet truth = options.truth ? *options.truth : dataset.relevance;
  SweepResult result;
  result.axis = axis;
  result.universe = decision_universe(dataset);
  const Stream stream = axis == SweepAxis::gamma ? Stream::context : Stream::relations;

  SarveOptions sarve_opts;
  sarve_opts.workers = options.workers;
  SarveOptions baseline_opts = sarve_opts;
  if (axis == SweepAxis::gamma)
    baseline_opts.context_filter = false;
  else
    baseline_opts.relations_gate = RelationsGate::popularity_only;

  std::optional<PairSet> previous;
  for (double value : grid) {
    Thresholds th = thresholds;
    (axis == SweepAxis::gamma ? th.gamma : th.beta) = value;

    const PairSet recs = run_sarve_prevalidated(dataset, th, sarve_opts).pairs(stream);
    result.points.push_back(metrics(score(recs, truth, result.universe), value));
    const PairSet base = run_sarve_prevalidated(dataset, th, baseline_opts).pairs(stream);
    result.baseline.push_back(metrics(score(base, truth, result.universe), value));

    if (previous && !std::includes(previous->begin(), previous->end(), recs.begin(),
                                   recs.end()))
      result.shrinkage_holds = false;
    previous = recs;
  }
  return result;
}

std::vector<double> parse_grid(std::string_view text) {
  auto number = [](std::string_view tok) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() ||
        !std::isfinite(v))
      throw ConfigError(fmt::format("bad grid number '{}'", tok));
    return v;
  };
  auto round12 = [](double v) { return std::round(v * 1e12) / 1e12; };

  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
      auto next = text.find(':', pos);
      parts.push_back(text.substr(pos, next - pos));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    if (parts.size() != 3) throw ConfigError("grid range must be start:end:step");
    const double start = number(parts[0]);
    const double end = number(parts[1]);
    const double step = number(parts[2]);
    if (step <= 0.0) throw ConfigError("grid step must be > 0");
    if (end < start) throw ConfigError("grid end must be >= start");
    const double span = (end - start) / step;
    const auto n = static_cast<long long>(std::floor(span + 1e-9));
    for (long long i = 0; i <= n; ++i) grid.push_back(round12(start + step * static_cast<double>(i)));
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto next = text.find(',', pos);
      grid.push_back(round12(number(text.substr(pos, next - pos))));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    if (!std::is_sorted(grid.begin(), grid.end()))
      throw ConfigError("grid values must be ascending");
  }
  return grid;
}

namespace {

std::string opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string("NA");
}

}  // namespace

std::string format_metric_row(const MetricPoint& p) {
  return fmt::format("{:.4f}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", p.threshold, opt(p.precision),
                     opt(p.recall), opt(p.f_measure), p.counts.e, p.counts.f, p.counts.g,
                     p.counts.h);
}

std::string format_sweep(const SweepResult& r) {
  std::string out;
  out += fmt::format("# axis {}\n", to_string(r.axis));
  out += fmt::format("# universe all participant x session pairs = {}\n", r.universe);
  out += fmt::format("# shrinkage {}\n", r.shrinkage_holds ? "holds" : "violated");
  out += "method\tthreshold\tprecision\trecall\tf_measure\te\tf\tg\th\n";
  const char* base = r.axis == SweepAxis::gamma ? "pearson-only" : "popularity-only";
  for (const auto& p : r.points) out += "sarve\t" + format_metric_row(p) + "\n";
  for (const auto& p : r.baseline) out += fmt::format("{}\t{}\n", base, format_metric_row(p));
  return out;
}

// ---------------------------------------------------------------------------

EvalReport evaluate(const Dataset& dataset, const Thresholds& thresholds,
                    const SplitSpec& split_spec, TruthMode truth_mode, unsigned workers) {
  const auto report = validate_dataset(dataset);
  if (!report.ok())
    throw DataError(fmt::format("refusing to evaluate an invalid dataset: {} ({})",
                                report.violations.front().invariant,
                                report.violations.front().record));
  thresholds.check();

  const auto parts = split(dataset, split_spec);
  const PairSet truth = truth_mode == TruthMode::labels
                            ? parts.test.relevance
                            : threshold_truth(dataset, thresholds);

  EvalReport out;
  out.universe = decision_universe(dataset);
  out.truth = truth_mode;
  out.train_records = parts.train.ratings.cell_count() + parts.train.contacts.entries().size();
  out.test_records = parts.test.ratings.cell_count() + parts.test.contacts.entries().size();

  SarveOptions opts;
  opts.workers = workers;
  const auto sarve = run_sarve_prevalidated(parts.train, thresholds, opts);
  const auto base = run_baselines(parts.train, thresholds, workers);

  auto add = [&](std::string method, const RecommendationSet& recs, Stream stream) {
    const double th = stream == Stream::context ? thresholds.gamma : thresholds.beta;
    out.rows.push_back(
        {std::move(method), stream, metrics(score(recs.pairs(stream), truth, out.universe), th)});
  };
  add("sarve", sarve, Stream::context);
  add("sarve", sarve, Stream::relations);
  add("pearson-only", base.pearson_only, Stream::context);
  add("popularity-only", base.popularity_only, Stream::relations);
  return out;
}

std::string format_eval_report(const EvalReport& r) {
  std::string out;
  out += fmt::format("# universe all participant x session pairs = {}\n", r.universe);
  out += fmt::format("# truth {}\n", to_string(r.truth));
  out += fmt::format("# records train={} test={}\n", r.train_records, r.test_records);
  out += "method\tstream\tthreshold\tprecision\trecall\tf_measure\te\tf\tg\th\n";
  for (const auto& row : r.rows)
    out += fmt::format("{}\t{}\t{}\n", row.method, to_string(row.stream),
                       format_metric_row(row.point));
  return out;
}

}  // namespace sarve
