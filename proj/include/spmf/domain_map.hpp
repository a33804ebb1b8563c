#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spmf/rating_store.hpp"

namespace spmf {

using DomainIndex = std::uint32_t;

/// Total assignment of every item in a RatingStore to one preference domain.
class DomainMap {
 public:
  /// Name of the domain collecting items without an explicit assignment.
  static constexpr const char* kDefaultDomain = "__default__";
  /// Name of the single domain used when no segmentation is requested.
  static constexpr const char* kGlobalDomain = "__all__";

  DomainMap() = default;
  DomainMap(std::vector<std::string> names, std::vector<DomainIndex> assignment);

  /// Every item in one domain.
  static DomainMap single(std::size_t num_items);

  std::size_t num_domains() const noexcept { return names_.size(); }
  std::size_t num_items() const noexcept { return assignment_.size(); }
  DomainIndex domain_of(ItemIndex item) const { return assignment_.at(item); }
  const std::string& name(DomainIndex d) const { return names_.at(d); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<DomainIndex> find(const std::string& name) const;

  /// Items of domain `d`, ascending.
  std::vector<ItemIndex> items_in(DomainIndex d) const;

  /// Assignments from the domain file for items that never occur in the
  /// ratings. They are kept for reference and play no part in training.
  const std::map<std::string, std::string>& unrated_items() const noexcept { return unrated_; }

 private:
  friend DomainMap load_domains(const std::optional<std::filesystem::path>&, const RatingStore&);

  std::vector<std::string> names_;
  std::vector<DomainIndex> assignment_;
  std::map<std::string, std::string> unrated_;
};

/// Reads `item<TAB>domain` lines. Items of `store` absent from the file go to
/// kDefaultDomain (created only when needed). Without a path, every item maps
/// to kGlobalDomain. Domains are indexed in first-seen order.
DomainMap load_domains(const std::optional<std::filesystem::path>& path, const RatingStore& store);

}  // namespace spmf
