#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spmf/domain_map.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/trust_graph.hpp"

namespace spmf {

enum class NegativePolicy { drop, keep };

struct InfluenceOptions {
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  double alpha = 0.4;
  /// Cap per target user, applied separately to linked and non-linked sides.
  std::size_t max_neighbors = 50;
  /// Minimum number of co-rated domain items for a pair to be scored.
  std::size_t min_overlap = 2;
  NegativePolicy negative_policy = NegativePolicy::drop;
  /// Worker threads; results do not depend on it.
  unsigned threads = 1;

  void validate() const;
};

struct InfluenceEntry {
  UserIndex source;
  UserIndex target;
  double weight;

  friend bool operator==(const InfluenceEntry&, const InfluenceEntry&) = default;
};

/// Sparse per-domain influence weights t(source -> target).
class InfluenceMatrix {
 public:
  InfluenceMatrix() = default;
  /// `entries[d]` must be sorted by (target, source) without repeats.
  InfluenceMatrix(std::size_t num_users, std::vector<std::string> domain_names,
                  std::vector<std::vector<InfluenceEntry>> entries, InfluenceOptions options);

  /// A matrix with no entries over `num_domains` unnamed domains.
  static InfluenceMatrix empty(std::size_t num_users, const DomainMap& domains);

  std::size_t num_users() const noexcept { return num_users_; }
  std::size_t num_domains() const noexcept { return entries_.size(); }
  const std::string& domain_name(DomainIndex d) const { return names_.at(d); }
  const InfluenceOptions& options() const noexcept { return options_; }
  double alpha() const noexcept { return options_.alpha; }

  std::span<const InfluenceEntry> entries(DomainIndex d) const { return entries_.at(d); }
  /// Entries of domain `d` whose target is `u`, ascending by source.
  std::span<const InfluenceEntry> incoming(DomainIndex d, UserIndex u) const;
  std::size_t total_entries() const noexcept;

 private:
  std::size_t num_users_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<InfluenceEntry>> entries_;
  std::vector<std::vector<std::size_t>> offsets_;
  InfluenceOptions options_;
};

/// Builds the per-domain influence matrix. Candidate pairs come from an
/// inverted item index, so only pairs sharing at least `min_overlap` rated
/// items of a domain are scored. Zero weights are never stored; negative
/// ones only under NegativePolicy::keep. For each target, at most
/// `max_neighbors` linked and `max_neighbors` non-linked sources survive,
/// chosen by descending |weight| with ties to the lower source index.
InfluenceMatrix build_influence_matrix(const RatingStore& train, const TrustGraph& graph,
                                       const DomainMap& domains, const InfluenceOptions& options);

/// `domain<TAB>source<TAB>target<TAB>weight` per entry, weight to 12
/// significant digits, domains in index order.
std::string format_influence(const InfluenceMatrix& matrix, const IdMap& users);
void export_influence(const InfluenceMatrix& matrix, const IdMap& users, const std::filesystem::path& path);

/// Reads the export format back. Domain and user names are resolved against
/// `domains` and `users`; `options` is recorded as construction metadata.
InfluenceMatrix import_influence(const std::filesystem::path& path, const IdMap& users, const DomainMap& domains,
                                 const InfluenceOptions& options = {});

}  // namespace spmf
