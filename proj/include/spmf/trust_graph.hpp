#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "spmf/id_map.hpp"
#include "spmf/rating_store.hpp"

namespace spmf {

/// Directed, unweighted trust relation among users of a RatingStore.
///
/// Edges are held in the user index space of the store they were loaded
/// against. `linked(a, b)` is the symmetric membership test used when
/// splitting neighbours into linked and non-linked sets.
class TrustGraph {
 public:
  TrustGraph() = default;

  /// Throws DataError on a self-loop or an out-of-range index. Repeated edges
  /// are collapsed and counted in duplicates_dropped().
  TrustGraph(std::size_t num_users, std::vector<std::pair<UserIndex, UserIndex>> edges);

  std::size_t num_users() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  /// Edges sorted by (truster, trustee).
  std::span<const std::pair<UserIndex, UserIndex>> edges() const noexcept { return edges_; }

  std::span<const UserIndex> trustees(UserIndex u) const;
  std::span<const UserIndex> trusters(UserIndex u) const;
  std::size_t out_degree(UserIndex u) const { return trustees(u).size(); }
  std::size_t in_degree(UserIndex u) const { return trusters(u).size(); }

  bool has_edge(UserIndex from, UserIndex to) const;
  /// True if an edge exists in either direction.
  bool linked(UserIndex a, UserIndex b) const { return has_edge(a, b) || has_edge(b, a); }

  std::size_t duplicates_dropped() const noexcept { return duplicates_; }
  /// Lines naming a user absent from the rating store (load_trust only).
  std::size_t unknown_users_skipped() const noexcept { return unknown_; }

 private:
  friend TrustGraph load_trust(const std::filesystem::path&, const IdMap&);

  std::vector<std::pair<UserIndex, UserIndex>> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<UserIndex> out_;
  std::vector<std::size_t> in_offsets_;
  std::vector<UserIndex> in_;
  std::size_t duplicates_ = 0;
  std::size_t unknown_ = 0;
};

/// Reads `truster<TAB>trustee` lines, resolving ids against `users`.
TrustGraph load_trust(const std::filesystem::path& path, const IdMap& users);

}  // namespace spmf
