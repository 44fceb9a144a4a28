#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sarve/domain.hpp"

namespace sarve {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

// Defaults: 60 presenters, 78 participants, 5 contacts each over a 720-minute day.
struct GeneratorSpec {
  int n_presenters = 60;
  int n_participants = 78;
  int contacts_per_presenter = 5;
  IntRange duration_range{5, 80};
  IntRange frequency_range{1, 7};
  IntRange rating_range{1, 5};
  int t_total = 720;
  std::vector<std::string> rooms{"RoomA", "RoomB"};
  // Talk lengths drawn uniformly: full, short and workshop talks.
  std::vector<int> talk_minutes{20, 15, 15};
  int question_minutes = 5;
  int n_interest_clusters = 4;
  int n_items = 40;
  // Tags rated per person.
  IntRange participant_tags{10, 25};
  IntRange presenter_tags{8, 16};
  // Probability a contact is drawn from the presenter's own cluster.
  double within_cluster_contact_bias = 0.7;
  std::uint64_t seed = 0;

  // Throws ConfigError for empty ranges or impossible counts.
  void check() const;
};

// Builds a dataset that passes validate_dataset. Persons fall into latent
// interest clusters; each cluster has its own preferred rating per tag, and
// members rate near that preference. Relevance labels are the same-cluster
// presenter sessions that fit the participant's availability.
// Throws DataError when the sessions do not fit into the rooms within T_total.
Dataset generate(const GeneratorSpec& spec);

// Latent cluster of each generated person, recomputed from the same seed.
std::map<PersonId, int> generated_clusters(const GeneratorSpec& spec);

using Histogram = std::map<int, long long>;

// Value histograms of contact durations, tag ratings and contact frequencies.
struct DistributionSummary {
  Histogram durations;
  Histogram ratings;
  Histogram frequencies;
};

DistributionSummary summarize(const Dataset& dataset);

std::string format_summary(const DistributionSummary& summary);

}  // namespace sarve
