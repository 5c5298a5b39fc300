#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wsrec/errors.hpp"

namespace wsrec {

/// Bijective mapping between opaque external id strings and dense indices
/// 0..count-1. Indices are assigned in first-appearance order.
class IdMap {
 public:
  IdMap() = default;

  /// Returns the index of `id`, inserting it if unseen.
  std::size_t get_or_add(std::string_view id);

  /// Index of `id`, or std::nullopt if absent.
  std::optional<std::size_t> find(std::string_view id) const;

  /// Index of `id`; throws DataError if absent.
  std::size_t at(std::string_view id) const;

  const std::string& id(std::size_t index) const { return ids_.at(index); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>
      index_of_;
};

}  // namespace wsrec
