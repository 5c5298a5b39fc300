#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "wsrec/errors.hpp"
#include "wsrec/id_map.hpp"
#include "wsrec/interaction_matrix.hpp"

namespace wsrec {
namespace {

TEST(IdMap, AssignsDenseIndicesInFirstAppearanceOrder) {
  IdMap map;
  EXPECT_EQ(map.get_or_add("b"), 0u);
  EXPECT_EQ(map.get_or_add("a"), 1u);
  EXPECT_EQ(map.get_or_add("b"), 0u);
  EXPECT_EQ(map.size(), 2u);
  EXPECT_EQ(map.id(0), "b");
  EXPECT_EQ(map.at("a"), 1u);
  EXPECT_FALSE(map.find("missing").has_value());
  EXPECT_THROW(map.at("missing"), DataError);
}

TEST(IdMap, BijectiveOnRandomIdSets) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<std::string> unique;
    while (unique.size() < 100) {
      unique.insert("id" + std::to_string(gen() % 100000));
    }
    IdMap map;
    for (const auto& id : unique) {
      map.get_or_add(id);
    }
    ASSERT_EQ(map.size(), unique.size());
    for (std::size_t k = 0; k < map.size(); ++k) {
      EXPECT_EQ(map.at(map.id(k)), k);
    }
  }
}

TEST(InteractionMatrix, BuildsSmallExample) {
  const auto m = InteractionMatrix::from_records(
      {{"u1", "i1"}, {"u1", "i2"}, {"u2", "i1"}});
  EXPECT_EQ(m.user_count(), 2u);
  EXPECT_EQ(m.item_count(), 2u);
  EXPECT_EQ(m.interaction_count(), 3u);
  const auto row0 = m.items_of(0);
  ASSERT_EQ(row0.size(), 2u);
  EXPECT_EQ(row0[0], 0u);
  EXPECT_EQ(row0[1], 1u);
  const auto row1 = m.items_of(1);
  ASSERT_EQ(row1.size(), 1u);
  EXPECT_EQ(row1[0], 0u);
  EXPECT_TRUE(m.has(0, 1));
  EXPECT_FALSE(m.has(1, 1));
}

TEST(InteractionMatrix, EmptyInput) {
  const auto m = InteractionMatrix::from_records({});
  EXPECT_EQ(m.user_count(), 0u);
  EXPECT_EQ(m.item_count(), 0u);
  EXPECT_EQ(m.interaction_count(), 0u);
}

TEST(InteractionMatrix, RejectsDuplicatePairs) {
  EXPECT_THROW(
      InteractionMatrix::from_records({{"u", "i"}, {"v", "i"}, {"u", "i"}}),
      DataError);
}

TEST(InteractionMatrix, RowsAreStrictlyIncreasing) {
  const auto m = InteractionMatrix::from_records(
      {{"u", "c"}, {"u", "a"}, {"u", "b"}, {"v", "a"}});
  const auto row = m.items_of(0);
  ASSERT_EQ(row.size(), 3u);
  EXPECT_TRUE(std::is_sorted(row.begin(), row.end()));
  EXPECT_TRUE(std::adjacent_find(row.begin(), row.end()) == row.end());
}

TEST(InteractionMatrix, RoundTripsRecordSet) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::set<std::pair<std::string, std::string>> unique;
    while (unique.size() < 60) {
      unique.insert({"u" + std::to_string(gen() % 20),
                     "i" + std::to_string(gen() % 25)});
    }
    std::vector<InteractionRecord> records(unique.begin(), unique.end());
    std::shuffle(records.begin(), records.end(), gen);

    const auto m = InteractionMatrix::from_records(records);
    const auto back = m.to_records();
    const std::set<std::pair<std::string, std::string>> back_set(back.begin(),
                                                                 back.end());
    EXPECT_EQ(back_set, unique);
  }
}

TEST(InteractionMatrix, ItemPopularityMatchesColumnCounts) {
  const auto m = InteractionMatrix::from_records(
      {{"u1", "a"}, {"u1", "b"}, {"u2", "a"}, {"u3", "a"}});
  const auto pop = m.item_popularity();
  ASSERT_EQ(pop.size(), 2u);
  EXPECT_EQ(pop[0], 3u);
  EXPECT_EQ(pop[1], 1u);
}

TEST(Sparsity, MatchesPublishedDatasetStats) {
  // movielens-1m and jester rows of the dataset summary table
  EXPECT_NEAR(sparsity(6039, 3628, 836478), 0.9618, 1e-4);
  EXPECT_NEAR(sparsity(122293, 150, 3587186), 0.8044, 1e-4);
}

TEST(Sparsity, FullyDenseAndErrors) {
  EXPECT_DOUBLE_EQ(sparsity(1, 1, 1), 0.0);
  EXPECT_THROW(sparsity(0, 5, 0), DataError);
  const InteractionMatrix empty;
  EXPECT_THROW(empty.sparsity(), DataError);
}

TEST(Sparsity, InUnitIntervalForNonEmptyMatrices) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t users = 1 + gen() % 30;
    const std::size_t items = 1 + gen() % 30;
    std::set<std::pair<std::size_t, std::size_t>> cells;
    const std::size_t want = 1 + gen() % (users * items);
    while (cells.size() < want) {
      cells.insert({gen() % users, gen() % items});
    }
    std::vector<InteractionRecord> records;
    for (const auto& [u, i] : cells) {
      records.emplace_back("u" + std::to_string(u), "i" + std::to_string(i));
    }
    const auto m = InteractionMatrix::from_records(records);
    const double s = m.sparsity();
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
}

}  // namespace
}  // namespace wsrec
