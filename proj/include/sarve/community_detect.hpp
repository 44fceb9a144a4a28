#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sarve/domain.hpp"

namespace sarve {

enum class Stream { context, relations };

// Which predicate admitted a recommendation.
enum class Gate {
  gamma,                // Pearson >= gamma
  beta,                 // tie >= beta
  beta_and_popularity,  // tie >= beta and presenter degree >= threshold
  popularity,           // presenter degree >= threshold only
};

const char* to_string(Stream stream);
const char* to_string(Gate gate);

struct Recommendation {
  PersonId participant;
  SessionId session;
  PersonId presenter;
  Stream stream = Stream::context;
  // Pearson value for the context stream, tie strength for relations.
  double score = 0.0;
  Gate gate = Gate::gamma;
  int presenter_degree = 0;
  // 1-based within (participant, stream).
  int rank = 0;

  bool popularity_only() const { return gate == Gate::popularity; }
};

// Pairs that were scored but fell below their gate. Not emitted.
struct Diagnostics {
  long long weak_context = 0;
  long long weak_relations = 0;
};

struct RecommendationSet {
  Thresholds thresholds;
  // Resolved degree threshold; unset when the popularity gate is off.
  std::optional<int> degree_threshold;
  // Ordered by participant, stream, rank.
  std::vector<Recommendation> items;
  Diagnostics diagnostics;

  std::vector<Recommendation> stream(Stream s) const;
  PairSet pairs(Stream s) const;
};

enum class RelationsGate {
  tie_or_popularity,
  popularity_only,
};

struct SarveOptions {
  // When false every (participant, session) is treated as context-matched.
  bool context_filter = true;
  RelationsGate relations_gate = RelationsGate::tie_or_popularity;
  unsigned workers = 1;
};

// Runs both recommendation streams over every (participant, presenter) pair.
// Throws DataError when the dataset does not validate and ConfigError for
// illegal thresholds. Output does not depend on options.workers.
RecommendationSet run_sarve(const Dataset& dataset, const Thresholds& thresholds,
                            const SarveOptions& options = {});

// Same as run_sarve without re-validating; the caller vouches for the dataset.
RecommendationSet run_sarve_prevalidated(const Dataset& dataset,
                                         const Thresholds& thresholds,
                                         const SarveOptions& options = {});

// Canonical tab-separated text, one record per recommendation.
std::string serialize_recommendations(const RecommendationSet& recs);

// Evidence in [0, 1]: (pearson + 1) / 2 for context, clamped tie for relations.
double combined_score(const Recommendation& rec);

struct ScheduleEntry {
  SessionId session;
  double combined_score = 0.0;
  int start = 0;
  int end = 0;
  // Set on dropped entries: the kept session that overlaps.
  std::optional<SessionId> conflict_with;
};

struct ParticipantSchedule {
  PersonId participant;
  std::vector<ScheduleEntry> kept;     // by start time
  std::vector<ScheduleEntry> dropped;  // in decision order
};

struct ScheduleProposal {
  std::vector<ParticipantSchedule> participants;
};

// Per participant, greedily keeps the highest combined-score session among
// overlapping ones. Intervals are half-open, so back-to-back sessions do not
// conflict. Throws LookupError for a recommended session missing from sessions.
ScheduleProposal resolve_conflicts(const RecommendationSet& recs,
                                   std::span<const Session> sessions);

std::string serialize_schedule(const ScheduleProposal& proposal);

}  // namespace sarve
