#include "wsrec/id_map.hpp"

namespace wsrec {

std::size_t IdMap::get_or_add(std::string_view id) {
  auto it = index_of_.find(id);
  if (it != index_of_.end()) {
    return it->second;
  }
  const std::size_t index = ids_.size();
  ids_.emplace_back(id);
  index_of_.emplace(ids_.back(), index);
  return index;
}

std::optional<std::size_t> IdMap::find(std::string_view id) const {
  auto it = index_of_.find(id);
  if (it == index_of_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t IdMap::at(std::string_view id) const {
  auto it = index_of_.find(id);
  if (it == index_of_.end()) {
    throw DataError("unknown id: " + std::string(id));
  }
  return it->second;
}

}  // namespace wsrec
