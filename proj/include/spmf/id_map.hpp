#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spmf {

/// Bijection between external string identifiers and dense indices
/// [0, size()). Indices are assigned in first-seen order.
class IdMap {
 public:
  IdMap() = default;
  explicit IdMap(std::vector<std::string> names);

  /// Returns the index for `name`, assigning the next free one if unseen.
  std::size_t intern(std::string_view name);

  std::optional<std::size_t> find(std::string_view name) const;
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  friend bool operator==(const IdMap& a, const IdMap& b) { return a.names_ == b.names_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

}  // namespace spmf
