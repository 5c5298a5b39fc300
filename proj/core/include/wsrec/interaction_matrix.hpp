#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wsrec/id_map.hpp"

namespace wsrec {

/// One (user_id, item_id) implicit-feedback event. All retained interactions
/// carry unit weight.
using InteractionRecord = std::pair<std::string, std::string>;

/// Sparsity rate 1 - interactions / (users * items).
/// Throws DataError when users or items is zero.
double sparsity(std::size_t users, std::size_t items, std::size_t interactions);

/// Deduplicated sparse user-by-item implicit-feedback matrix in CSR form,
/// immutable after construction. Row order follows first appearance of user
/// ids in the input records; item indices likewise. Every stored interaction
/// has weight exactly 1.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  /// Builds the matrix from deduplicated records. A repeated (user, item)
  /// pair signals an upstream preprocessing bug and throws DataError.
  static InteractionMatrix from_records(
      const std::vector<InteractionRecord>& records);

  std::size_t user_count() const { return user_map_.size(); }
  std::size_t item_count() const { return item_map_.size(); }
  std::size_t interaction_count() const { return items_.size(); }

  const IdMap& user_map() const { return user_map_; }
  const IdMap& item_map() const { return item_map_; }

  /// Item indices consumed by `user`, strictly increasing.
  std::span<const std::uint32_t> items_of(std::size_t user) const {
    return {items_.data() + offsets_[user],
            offsets_[user + 1] - offsets_[user]};
  }

  /// True iff (user, item) is an observed interaction.
  bool has(std::size_t user, std::uint32_t item) const;

  /// All interactions as (user_index, item_index), row-major order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> index_pairs() const;

  /// All interactions as external-id pairs, row-major order.
  std::vector<InteractionRecord> to_records() const;

  /// Per-item interaction counts (derived item-major view).
  std::vector<std::uint32_t> item_popularity() const;

  double sparsity() const;

 private:
  IdMap user_map_;
  IdMap item_map_;
  std::vector<std::size_t> offsets_{0};  // size user_count()+1
  std::vector<std::uint32_t> items_;    // size interaction_count()
};

}  // namespace wsrec
