#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wsrec/interaction_matrix.hpp"

namespace wsrec {

/// One cross-validation fold. `test` pairs are indexed in the train matrix's
/// id space; test interactions whose user or item never occurs in training
/// were dropped (cold-start exclusion) and counted.
struct Fold {
  InteractionMatrix train;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> test;
  std::size_t dropped_cold_start = 0;
};

struct FoldSplit {
  static constexpr int kFoldCount = 5;
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
};

/// Shuffles all interactions with the seed and deals them round-robin into
/// five equal (+/-1) disjoint test folds; each fold's train matrix is built
/// from the other four. Throws DataError when fewer than five interactions
/// exist.
FoldSplit split_folds(const InteractionMatrix& m, std::uint64_t seed);

/// Test items grouped per train-matrix user index; users without test items
/// get an empty list. Lists are sorted ascending.
std::vector<std::vector<std::uint32_t>> test_items_by_user(const Fold& fold);

}  // namespace wsrec
