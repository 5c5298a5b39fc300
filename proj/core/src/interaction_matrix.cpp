#include "wsrec/interaction_matrix.hpp"

#include <algorithm>

#include "wsrec/errors.hpp"

namespace wsrec {

double sparsity(std::size_t users, std::size_t items,
                std::size_t interactions) {
  if (users == 0 || items == 0) {
    throw DataError("sparsity is undefined for an empty matrix");
  }
  const double cells = static_cast<double>(users) * static_cast<double>(items);
  return 1.0 - static_cast<double>(interactions) / cells;
}

InteractionMatrix InteractionMatrix::from_records(
    const std::vector<InteractionRecord>& records) {
  InteractionMatrix m;
  std::vector<std::vector<std::uint32_t>> rows;
  for (const auto& [user_id, item_id] : records) {
    const std::size_t u = m.user_map_.get_or_add(user_id);
    const std::uint32_t i =
        static_cast<std::uint32_t>(m.item_map_.get_or_add(item_id));
    if (u == rows.size()) {
      rows.emplace_back();
    }
    rows[u].push_back(i);
  }

  m.offsets_.reserve(rows.size() + 1);
  m.items_.reserve(records.size());
  for (std::size_t u = 0; u < rows.size(); ++u) {
    auto& row = rows[u];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw DataError("duplicate (user, item) pair for user '" +
                      m.user_map_.id(u) + "'; input must be deduplicated");
    }
    m.items_.insert(m.items_.end(), row.begin(), row.end());
    m.offsets_.push_back(m.items_.size());
  }
  return m;
}

bool InteractionMatrix::has(std::size_t user, std::uint32_t item) const {
  const auto row = items_of(user);
  return std::binary_search(row.begin(), row.end(), item);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>>
InteractionMatrix::index_pairs() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(interaction_count());
  for (std::size_t u = 0; u < user_count(); ++u) {
    for (const std::uint32_t i : items_of(u)) {
      pairs.emplace_back(static_cast<std::uint32_t>(u), i);
    }
  }
  return pairs;
}

std::vector<InteractionRecord> InteractionMatrix::to_records() const {
  std::vector<InteractionRecord> records;
  records.reserve(interaction_count());
  for (std::size_t u = 0; u < user_count(); ++u) {
    for (const std::uint32_t i : items_of(u)) {
      records.emplace_back(user_map_.id(u), item_map_.id(i));
    }
  }
  return records;
}

std::vector<std::uint32_t> InteractionMatrix::item_popularity() const {
  std::vector<std::uint32_t> counts(item_count(), 0);
  for (const std::uint32_t i : items_) {
    ++counts[i];
  }
  return counts;
}

double InteractionMatrix::sparsity() const {
  return wsrec::sparsity(user_count(), item_count(), interaction_count());
}

}  // namespace wsrec
