#include "sarve/social_graph.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace sarve {

TieStrength tie_strength(const ContactLog& log, const PersonId& presenter,
                         const PersonId& participant) {
  if (log.t_total() <= 0)
    throw ConfigError(fmt::format("T_total must be > 0, got {}", log.t_total()));
  TieStrength tie{presenter, participant, 0.0};
  if (const Contact* c = log.find(presenter, participant)) {
    const long long product =
        static_cast<long long>(c->frequency) * static_cast<long long>(c->duration_min);
    tie.value = static_cast<double>(product) / static_cast<double>(log.t_total());
  }
  return tie;
}

CentralityScore degree_centrality(const ContactLog& log, const PersonId& presenter) {
  CentralityScore score{presenter, 0};
  const auto& entries = log.entries();
  for (auto it = entries.lower_bound({presenter, PersonId()});
       it != entries.end() && it->first.first == presenter; ++it) {
    if (it->second.frequency >= 1 && it->second.duration_min > 0) ++score.degree;
  }
  return score;
}

int median_degree(std::span<const CentralityScore> scores) {
  if (scores.empty()) return 0;
  std::vector<int> degrees;
  degrees.reserve(scores.size());
  for (const auto& s : scores) degrees.push_back(s.degree);
  const auto mid = degrees.begin() + static_cast<std::ptrdiff_t>((degrees.size() - 1) / 2);
  std::nth_element(degrees.begin(), mid, degrees.end());
  return *mid;
}

std::optional<int> resolve_degree_threshold(const DegreeThreshold& threshold,
                                            std::span<const CentralityScore> scores) {
  switch (threshold.mode) {
    case DegreeThreshold::Mode::off:
      return std::nullopt;
    case DegreeThreshold::Mode::fixed:
      return threshold.value;
    case DegreeThreshold::Mode::median:
      break;
  }
  return median_degree(scores);
}

}  // namespace sarve
