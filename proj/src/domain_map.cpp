#include "spmf/domain_map.hpp"

#include <limits>
#include <unordered_map>

#include "spmf/errors.hpp"
#include "text_io.hpp"

namespace spmf {

DomainMap::DomainMap(std::vector<std::string> names, std::vector<DomainIndex> assignment)
    : names_(std::move(names)), assignment_(std::move(assignment)) {
  for (auto d : assignment_) {
    if (d >= names_.size()) throw DataError("domain index out of range");
  }
}

DomainMap DomainMap::single(std::size_t num_items) {
  return DomainMap({kGlobalDomain}, std::vector<DomainIndex>(num_items, 0));
}

std::optional<DomainIndex> DomainMap::find(const std::string& name) const {
  for (std::size_t d = 0; d < names_.size(); ++d) {
    if (names_[d] == name) return static_cast<DomainIndex>(d);
  }
  return std::nullopt;
}

std::vector<ItemIndex> DomainMap::items_in(DomainIndex d) const {
  std::vector<ItemIndex> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == d) out.push_back(static_cast<ItemIndex>(i));
  }
  return out;
}

DomainMap load_domains(const std::optional<std::filesystem::path>& path, const RatingStore& store) {
  const std::size_t n = store.num_items();
  if (!path) return DomainMap::single(n);

  constexpr auto kUnassigned = std::numeric_limits<DomainIndex>::max();
  DomainMap map;
  map.assignment_.assign(n, kUnassigned);
  std::unordered_map<std::string, DomainIndex> by_name;
  auto domain_index = [&](std::string_view name) {
    auto [it, fresh] = by_name.try_emplace(std::string(name), static_cast<DomainIndex>(map.names_.size()));
    if (fresh) map.names_.emplace_back(name);
    return it->second;
  };

  detail::for_each_record(*path, 2, [&](const auto& f, std::size_t lineno) {
    const std::string domain(f[1]);
    if (domain == DomainMap::kDefaultDomain) {
      throw DataError("domain name '" + domain + "' is reserved", lineno);
    }
    if (auto item = store.items().find(f[0])) {
      DomainIndex d = domain_index(domain);
      auto& slot = map.assignment_[*item];
      if (slot != kUnassigned && slot != d) {
        throw DataError("item '" + std::string(f[0]) + "' assigned to two domains", lineno);
      }
      slot = d;
    } else {
      auto [it, fresh] = map.unrated_.try_emplace(std::string(f[0]), domain);
      if (!fresh && it->second != domain) {
        throw DataError("item '" + std::string(f[0]) + "' assigned to two domains", lineno);
      }
    }
  });

  for (auto& slot : map.assignment_) {
    if (slot == kUnassigned) slot = domain_index(DomainMap::kDefaultDomain);
  }
  return map;
}

}  // namespace spmf
