#include "spmf/id_map.hpp"

#include <stdexcept>

namespace spmf {

IdMap::IdMap(std::vector<std::string> names) {
  names_.reserve(names.size());
  for (auto& n : names) {
    if (index_.contains(n)) throw std::invalid_argument("duplicate id '" + n + "'");
    index_.emplace(n, names_.size());
    names_.push_back(std::move(n));
  }
}

std::size_t IdMap::intern(std::string_view name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  std::size_t idx = names_.size();
  names_.emplace_back(name);
  index_.emplace(names_.back(), idx);
  return idx;
}

std::optional<std::size_t> IdMap::find(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

}  // namespace spmf
