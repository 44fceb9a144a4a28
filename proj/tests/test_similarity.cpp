#include <gtest/gtest.h>

#include <algorithm>

#include "sarve/similarity.hpp"
#include "support/oracles.hpp"

namespace sarve {
namespace {

using Row = std::vector<std::optional<int>>;
using testing::pearson_oracle;

RatingMatrix two_rows(const Row& c, const Row& d) {
  std::vector<ItemId> items;
  for (std::size_t i = 0; i < c.size(); ++i) items.emplace_back("k" + std::to_string(i));
  RatingMatrix m(items);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i]) m.set(PersonId("c"), items[i], *c[i]);
    if (d[i]) m.set(PersonId("d"), items[i], *d[i]);
  }
  return m;
}

std::optional<double> sim(const Row& c, const Row& d, int min_overlap = 2) {
  return pearson(two_rows(c, d), PersonId("c"), PersonId("d"), min_overlap).value;
}

Row random_row(Rng& rng, int n, double density) {
  Row r(static_cast<std::size_t>(n));
  for (auto& cell : r)
    if (rng.bernoulli(density)) cell = static_cast<int>(rng.uniform_int(1, 5));
  return r;
}

TEST(Pearson, IdenticalVectors) {
  const auto v = sim({1, 3, 5, 2}, {1, 3, 5, 2});
  ASSERT_TRUE(v);
  EXPECT_NEAR(*v, 1.0, 1e-12);
}

TEST(Pearson, Reversed) {
  const auto v = sim({1, 5}, {5, 1});
  ASSERT_TRUE(v);
  EXPECT_NEAR(*v, -1.0, 1e-12);
}

TEST(Pearson, WorkedTriple) {
  const Row c{4, 2, 5}, d{3, 1, 4};
  const auto v = sim(c, d);
  ASSERT_TRUE(v);
  EXPECT_NEAR(*v, *pearson_oracle(c, d), 1e-9);
  EXPECT_NEAR(*v, 1.0, 1e-9);
}

TEST(Pearson, ZeroVarianceIsUndefined) {
  EXPECT_FALSE(sim({3, 3, 3}, {1, 4, 5}));
  EXPECT_FALSE(sim({1, 4, 5}, {2, 2, 2}));
}

TEST(Pearson, MinOverlap) {
  const Row c{1, 5, std::nullopt}, d{2, 4, 3};
  EXPECT_TRUE(sim(c, d, 2));
  EXPECT_FALSE(sim(c, d, 3));
  EXPECT_FALSE(sim({1, std::nullopt}, {std::nullopt, 2}));
}

TEST(Pearson, GlobalMeansNotCoRatedMeans) {
  // c's mean includes the third item, which d never rated.
  const Row c{2, 4, 5}, d{1, 5, std::nullopt};
  const auto v = sim(c, d);
  ASSERT_TRUE(v);
  EXPECT_NEAR(*v, *pearson_oracle(c, d), 1e-12);
  const auto co_mean = sim({2, 4}, {1, 5});
  EXPECT_NE(std::llround(*v * 1e9), std::llround(*co_mean * 1e9));
}

TEST(Pearson, ReportsCoRatedCount) {
  const auto m = two_rows({1, 2, std::nullopt, 4}, {5, std::nullopt, 3, 1});
  const auto s = pearson(m, PersonId("c"), PersonId("d"));
  EXPECT_EQ(s.co_rated_count, 2);
  EXPECT_EQ(s.presenter, PersonId("c"));
  EXPECT_EQ(s.participant, PersonId("d"));
}

TEST(Pearson, MissingRowIsLookupError) {
  const auto m = two_rows({1, 2}, {2, 1});
  EXPECT_THROW(pearson(m, PersonId("c"), PersonId("zz")), LookupError);
}

TEST(Pearson, RandomAgainstOracle) {
  Rng rng(101);
  int defined = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 15));
    Row c = random_row(rng, n, 0.7), d = random_row(rng, n, 0.7);
    c[0] = c[0].value_or(3);
    d[0] = d[0].value_or(2);
    const auto got = sim(c, d);
    const auto want = pearson_oracle(c, d);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) continue;
    ++defined;
    EXPECT_NEAR(*got, *want, 1e-9);
    EXPECT_GE(*got, -1.0);
    EXPECT_LE(*got, 1.0);
  }
  EXPECT_GT(defined, 1000);
}

TEST(Pearson, Symmetric) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Row c = random_row(rng, 10, 0.8), d = random_row(rng, 10, 0.8);
    if (!testing::has_any_rating(c) || !testing::has_any_rating(d)) continue;
    const auto m = two_rows(c, d);
    const auto a = pearson(m, PersonId("c"), PersonId("d")).value;
    const auto b = pearson(m, PersonId("d"), PersonId("c")).value;
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_DOUBLE_EQ(*a, *b);
  }
}

TEST(Pearson, ShiftInvariant) {
  // shifting every rating of one person by a constant leaves centered values unchanged
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    Row c(8), d = random_row(rng, 8, 0.8);
    for (auto& cell : c)
      if (rng.bernoulli(0.8)) cell = static_cast<int>(rng.uniform_int(1, 3));
    Row shifted = c;
    for (auto& cell : shifted)
      if (cell) *cell += 2;
    if (!testing::has_any_rating(c) || !testing::has_any_rating(d)) continue;
    const auto a = sim(c, d), b = sim(shifted, d);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_NEAR(*a, *b, 1e-12);
  }
}

TEST(Gamma, Boundary) {
  SimilarityScore s{PersonId("c"), PersonId("d"), 0.6, 3};
  EXPECT_TRUE(passes_gamma(s, 0.6));
  s.value = 0.59;
  EXPECT_FALSE(passes_gamma(s, 0.6));
  s.value.reset();
  EXPECT_FALSE(passes_gamma(s, -1.0));
}

TEST(Gamma, MonotoneShrinkage) {
  Rng rng(33);
  std::vector<double> values;
  for (int trial = 0; trial < 300; ++trial) {
    const Row c = random_row(rng, 12, 0.8), d = random_row(rng, 12, 0.8);
    if (!testing::has_any_rating(c) || !testing::has_any_rating(d)) continue;
    if (auto v = sim(c, d)) values.push_back(*v);
  }
  long long prev = -1;
  for (double g = 1.0; g >= -1.0; g -= 0.05) {
    long long n = 0;
    for (double v : values)
      if (passes_gamma({PersonId("c"), PersonId("d"), v, 2}, g)) ++n;
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(KMostSimilar, MatchesSortThenTruncate) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_items = 10;
    std::vector<ItemId> items;
    for (int i = 0; i < n_items; ++i) items.emplace_back("k" + std::to_string(i));
    RatingMatrix m(items);
    const PersonId target("t");
    std::vector<PersonId> cands;
    std::map<PersonId, Row> rows;
    for (int p = 0; p < 12; ++p) cands.emplace_back(fmt::format("p{:02}", p));
    rows[target] = random_row(rng, n_items, 0.8);
    rows[target][0] = 4;
    for (auto& c : cands) {
      rows[c] = random_row(rng, n_items, 0.6);
      rows[c][0] = rows[c][0].value_or(1);
    }
    for (auto& [id, row] : rows)
      for (int i = 0; i < n_items; ++i)
        if (row[static_cast<std::size_t>(i)])
          m.set(id, items[static_cast<std::size_t>(i)], *row[static_cast<std::size_t>(i)]);

    struct Ref {
      PersonId id;
      double v;
      int co;
    };
    std::vector<Ref> ref;
    for (auto& c : cands) {
      const auto v = pearson_oracle(rows[c], rows[target]);
      if (!v) continue;
      int co = 0;
      for (int i = 0; i < n_items; ++i)
        co += rows[c][static_cast<std::size_t>(i)] && rows[target][static_cast<std::size_t>(i)];
      ref.push_back({c, *v, co});
    }
    std::sort(ref.begin(), ref.end(), [](const Ref& a, const Ref& b) {
      const auto qa = std::llround(a.v * 1e12), qb = std::llround(b.v * 1e12);
      if (qa != qb) return qa > qb;
      if (a.co != b.co) return a.co > b.co;
      return a.id < b.id;
    });
    const int k = static_cast<int>(rng.uniform_int(1, 8));
    const auto got = k_most_similar(m, target, cands, k);
    ASSERT_EQ(got.size(), std::min<std::size_t>(ref.size(), static_cast<std::size_t>(k)));
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].presenter, ref[i].id);
      EXPECT_NEAR(*got[i].value, ref[i].v, 1e-9);
    }
  }
}

TEST(KMostSimilar, RejectsNonPositiveK) {
  const auto m = two_rows({1, 2}, {2, 1});
  const std::vector<PersonId> cands{PersonId("d")};
  EXPECT_THROW(k_most_similar(m, PersonId("c"), cands, 0), ConfigError);
}

}  // namespace
}  // namespace sarve
