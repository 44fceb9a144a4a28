#pragma once

#include <span>

#include "sarve/domain.hpp"

namespace sarve {

struct TieStrength {
  PersonId presenter;
  PersonId participant;
  double value = 0.0;
};

// frequency * duration / T_total. A missing log entry has strength 0.
// Not clamped to 1. Throws ConfigError when T_total <= 0.
TieStrength tie_strength(const ContactLog& log, const PersonId& presenter,
                         const PersonId& participant);

inline bool passes_beta(const TieStrength& tie, double beta) {
  return tie.value >= beta;
}

struct CentralityScore {
  PersonId presenter;
  int degree = 0;
};

// Number of distinct participants directly linked to the presenter.
CentralityScore degree_centrality(const ContactLog& log, const PersonId& presenter);

inline bool passes_popularity(const CentralityScore& score, int threshold) {
  return score.degree >= threshold;
}

// Lower median of the degrees (element (n-1)/2 after sorting); 0 if empty.
int median_degree(std::span<const CentralityScore> scores);

// Resolves a DegreeThreshold against the presenters' degrees. Unset when the
// popularity gate is off.
std::optional<int> resolve_degree_threshold(const DegreeThreshold& threshold,
                                            std::span<const CentralityScore> scores);

}  // namespace sarve
