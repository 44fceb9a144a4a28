#include "sarve/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace sarve {
namespace {

struct RowStats {
  long long sum = 0;
  long long count = 0;
};

RowStats stats(std::span<const std::optional<int>> row) {
  RowStats s;
  for (const auto& cell : row) {
    if (!cell) continue;
    s.sum += *cell;
    ++s.count;
  }
  return s;
}

}  // namespace

SimilarityScore pearson(const RatingMatrix& matrix, const PersonId& c,
                        const PersonId& d, int min_overlap) {
  SimilarityScore out{c, d, std::nullopt, 0};
  auto rc = matrix.row(c);
  auto rd = matrix.row(d);
  const RowStats sc = stats(rc);
  const RowStats sd = stats(rd);

  // Centered ratings are scaled by the row count, n*r - sum, so that every
  // term is an exact integer; the scale cancels in the ratio.
  long long cross = 0;
  long long norm_c = 0;
  long long norm_d = 0;
  for (std::size_t i = 0; i < rc.size(); ++i) {
    if (!rc[i] || !rd[i]) continue;
    ++out.co_rated_count;
    const long long a = sc.count * *rc[i] - sc.sum;
    const long long b = sd.count * *rd[i] - sd.sum;
    cross += a * b;
    norm_c += a * a;
    norm_d += b * b;
  }
  if (out.co_rated_count < min_overlap || norm_c == 0 || norm_d == 0) return out;

  const long double denom =
      std::sqrt(static_cast<long double>(norm_c) * static_cast<long double>(norm_d));
  const double value = static_cast<double>(static_cast<long double>(cross) / denom);
  out.value = std::clamp(value, -1.0, 1.0);
  return out;
}

std::vector<SimilarityScore> k_most_similar(const RatingMatrix& matrix,
                                            const PersonId& target,
                                            std::span<const PersonId> candidates,
                                            int k, int min_overlap) {
  if (k < 1) throw ConfigError(fmt::format("k must be >= 1, got {}", k));
  std::vector<SimilarityScore> scores;
  for (const auto& cand : candidates) {
    auto s = pearson(matrix, cand, target, min_overlap);
    if (s.defined()) scores.push_back(std::move(s));
  }
  std::sort(scores.begin(), scores.end(),
            [](const SimilarityScore& a, const SimilarityScore& b) {
              if (*a.value != *b.value) return *a.value > *b.value;
              if (a.co_rated_count != b.co_rated_count)
                return a.co_rated_count > b.co_rated_count;
              return a.presenter < b.presenter;
            });
  if (scores.size() > static_cast<std::size_t>(k)) scores.resize(k);
  return scores;
}

}  // namespace sarve
