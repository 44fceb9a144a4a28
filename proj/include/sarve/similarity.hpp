#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sarve/domain.hpp"

namespace sarve {

inline constexpr int kDefaultMinOverlap = 2;

struct SimilarityScore {
  PersonId presenter;
  PersonId participant;
  // Unset when fewer than min_overlap co-rated items exist or either
  // centered co-rated vector has zero norm.
  std::optional<double> value;
  int co_rated_count = 0;

  bool defined() const { return value.has_value(); }
};

// Pearson correlation summed over items rated by both persons, each person
// centered on their global mean rating. Symmetric in (c, d); the result
// records c as presenter and d as participant. Throws LookupError when
// either person has no rating row.
SimilarityScore pearson(const RatingMatrix& matrix, const PersonId& c,
                        const PersonId& d, int min_overlap = kDefaultMinOverlap);

// The k highest defined scores between target and candidates, ordered by
// value desc, co-rated count desc, then candidate id asc. Each score carries
// the candidate as presenter and target as participant.
std::vector<SimilarityScore> k_most_similar(const RatingMatrix& matrix,
                                            const PersonId& target,
                                            std::span<const PersonId> candidates,
                                            int k,
                                            int min_overlap = kDefaultMinOverlap);

// Inclusive: value >= gamma. Undefined scores never pass.
inline bool passes_gamma(const SimilarityScore& score, double gamma) {
  return score.value.has_value() && *score.value >= gamma;
}

}  // namespace sarve
