#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sarve/community_detect.hpp"
#include "sarve/domain.hpp"

namespace sarve {

// e: relevant and recommended, f: recommended but irrelevant,
// g: relevant but not recommended, h: neither.
struct ConfusionCounts {
  long long e = 0;
  long long f = 0;
  long long g = 0;
  long long h = 0;

  long long total() const { return e + f + g + h; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct MetricPoint {
  double threshold = 0.0;
  // Unset when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_measure;
  ConfusionCounts counts;
};

// Harmonic mean of precision and recall; unset when P + R == 0.
std::optional<double> f_measure(double precision, double recall);

MetricPoint metrics(const ConfusionCounts& counts, double threshold = 0.0);

// Counts over a decision universe of `universe` (participant, session) pairs.
// Throws DataError when recs and relevant do not fit in the universe.
ConfusionCounts score(const PairSet& recs, const PairSet& relevant, long long universe);

// Number of participant x session pairs.
long long decision_universe(const Dataset& dataset);

// ---------------------------------------------------------------------------
// Train/test split

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct SplitResult {
  Dataset train;
  Dataset test;
};

// Partitions each participant's rating and contact records so that every
// participant with records appears in both halves and keeps at least one
// training rating. Records of non-participants stay in train. Everything else
// (persons, sessions, availability, relevance labels) is copied to both.
// Throws DataError naming a participant with a single record, ConfigError for
// a fraction outside (0, 1).
SplitResult split(const Dataset& dataset, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Ground truth

enum class TruthMode { labels, thresholds };

const char* to_string(TruthMode mode);
TruthMode parse_truth_mode(std::string_view text);

// Pairs whose presenter clears both gamma and beta and whose session matches
// the participant's context. Circular when used to score the same engine;
// offered for comparison with the labelled ground truth only.
PairSet threshold_truth(const Dataset& dataset, const Thresholds& thresholds);

// ---------------------------------------------------------------------------
// Baselines

struct BaselineSets {
  // Context stream with the context filter forced open.
  RecommendationSet pearson_only;
  // Relations stream admitted by presenter degree alone.
  RecommendationSet popularity_only;
};

BaselineSets run_baselines(const Dataset& dataset, const Thresholds& thresholds,
                           unsigned workers = 1);

// ---------------------------------------------------------------------------
// Threshold sweeps

enum class SweepAxis { gamma, beta };

const char* to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepOptions {
  // Defaults to the dataset's relevance labels.
  std::optional<PairSet> truth;
  unsigned workers = 1;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::gamma;
  long long universe = 0;
  // SARVE stream for the axis (context for gamma, relations for beta).
  std::vector<MetricPoint> points;
  // pearson-only for gamma, popularity-only for beta.
  std::vector<MetricPoint> baseline;
  // Recommended sets nest along the grid.
  bool shrinkage_holds = true;
};

// One point per grid value with every other threshold fixed. The grid must be
// ascending. Throws DataError for an invalid dataset.
SweepResult sweep(const Dataset& dataset, SweepAxis axis, std::span<const double> grid,
                  const Thresholds& thresholds, const SweepOptions& options = {});

// Parses "start:end:step" (inclusive of end when step divides the span) or a
// comma-separated list. Values are rounded to 12 decimals.
std::vector<double> parse_grid(std::string_view text);

// threshold, P, R, F, e, f, g, h; undefined metrics print as NA.
std::string format_metric_row(const MetricPoint& p);
std::string format_sweep(const SweepResult& result);

// ---------------------------------------------------------------------------
// Full evaluation: split, recommend on train, score against truth.

struct EvalRow {
  std::string method;
  Stream stream = Stream::context;
  MetricPoint point;
};

struct EvalReport {
  long long universe = 0;
  TruthMode truth = TruthMode::labels;
  std::size_t train_records = 0;
  std::size_t test_records = 0;
  std::vector<EvalRow> rows;
};

EvalReport evaluate(const Dataset& dataset, const Thresholds& thresholds,
                    const SplitSpec& split_spec, TruthMode truth, unsigned workers = 1);

std::string format_eval_report(const EvalReport& report);

}  // namespace sarve
