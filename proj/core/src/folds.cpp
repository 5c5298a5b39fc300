#include "wsrec/folds.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "wsrec/errors.hpp"
#include "wsrec/rng.hpp"

namespace wsrec {

FoldSplit split_folds(const InteractionMatrix& m, std::uint64_t seed) {
  const std::size_t total = m.interaction_count();
  if (total < static_cast<std::size_t>(FoldSplit::kFoldCount)) {
    throw DataError("need at least five interactions to split five folds");
  }

  const auto pairs = m.index_pairs();
  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 gen(seed);
  shuffle(order, gen);

  // fold_of[k] = test fold of interaction k (matrix row order).
  std::vector<std::uint8_t> fold_of(total);
  for (std::size_t pos = 0; pos < total; ++pos) {
    fold_of[order[pos]] = static_cast<std::uint8_t>(pos % FoldSplit::kFoldCount);
  }

  FoldSplit split;
  split.seed = seed;
  split.folds.resize(FoldSplit::kFoldCount);
  for (int f = 0; f < FoldSplit::kFoldCount; ++f) {
    Fold& fold = split.folds[static_cast<std::size_t>(f)];

    std::vector<InteractionRecord> train_records;
    train_records.reserve(total - total / FoldSplit::kFoldCount);
    for (std::size_t k = 0; k < total; ++k) {
      if (fold_of[k] != f) {
        train_records.emplace_back(m.user_map().id(pairs[k].first),
                                   m.item_map().id(pairs[k].second));
      }
    }
    fold.train = InteractionMatrix::from_records(train_records);

    for (std::size_t k = 0; k < total; ++k) {
      if (fold_of[k] != f) {
        continue;
      }
      const auto user = fold.train.user_map().find(m.user_map().id(pairs[k].first));
      const auto item = fold.train.item_map().find(m.item_map().id(pairs[k].second));
      if (!user || !item) {
        ++fold.dropped_cold_start;
        continue;
      }
      fold.test.emplace_back(static_cast<std::uint32_t>(*user),
                             static_cast<std::uint32_t>(*item));
    }
  }
  return split;
}

std::vector<std::vector<std::uint32_t>> test_items_by_user(const Fold& fold) {
  std::vector<std::vector<std::uint32_t>> by_user(fold.train.user_count());
  for (const auto& [user, item] : fold.test) {
    by_user[user].push_back(item);
  }
  for (auto& items : by_user) {
    std::sort(items.begin(), items.end());
  }
  return by_user;
}

}  // namespace wsrec
