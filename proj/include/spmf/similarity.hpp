#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spmf/domain_map.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/trust_graph.hpp"

namespace spmf {

/// A user's activity inside one preference domain.
struct DomainProfile {
  /// Ratings on items of the domain, ascending by item index.
  std::span<const IndexedRating> ratings;
  /// Mean over all of `ratings`; absent when the user rated nothing there.
  std::optional<double> mean;
  /// Share of the domain's rated items that this user rated.
  std::optional<double> experience;
};

/// Per (user, domain) rating slices, means, and experience, computed once
/// from a store and a domain assignment.
class DomainProfiles {
 public:
  DomainProfiles(const RatingStore& store, const DomainMap& domains);

  DomainProfile profile(UserIndex u, DomainIndex d) const;
  /// Number of distinct items of `d` rated by at least one user.
  std::size_t rated_items(DomainIndex d) const { return rated_items_.at(d); }
  std::size_t num_users() const noexcept { return user_offsets_.size() - 1; }
  std::size_t num_domains() const noexcept { return rated_items_.size(); }

 private:
  struct Slice {
    DomainIndex domain;
    std::uint32_t begin;
    std::uint32_t end;
    double mean;
  };
  std::vector<IndexedRating> ratings_;  // grouped by user, then domain, then item
  std::vector<std::size_t> user_offsets_;  // into slices_
  std::vector<Slice> slices_;
  std::vector<std::size_t> rated_items_;
};

/// Pearson correlation over the items both users rated, each rating centred
/// on the owner's mean over its full rated set (not only the shared items).
/// Absent when nothing is shared or a deviation norm over the shared items
/// is zero. Result is clamped into [-1, 1].
std::optional<double> pearson_on_shared(std::span<const IndexedRating> a, double mean_a,
                                        std::span<const IndexedRating> b, double mean_b);

/// Number of items present in both ascending rating rows.
std::size_t shared_count(std::span<const IndexedRating> a, std::span<const IndexedRating> b);

std::optional<double> domain_mean(const RatingStore& store, UserIndex user, DomainIndex domain,
                                  const DomainMap& domains);

/// Domain-segmented PCC between `a` and `b`. Symmetric in its users.
std::optional<double> pcc_domain_similarity(const RatingStore& store, UserIndex a, UserIndex b,
                                            DomainIndex domain, const DomainMap& domains);

/// Throws UndefinedExperience if `user` rated nothing in `domain`.
double experience(const RatingStore& store, UserIndex user, DomainIndex domain, const DomainMap& domains);

/// Classic similarities over a scope: cosine on raw rating vectors with
/// missing entries as zero, Jaccard on rated-item sets, and the PCC above.
/// All three are absent when either user has no rating in scope.
struct ReferenceSimilarities {
  std::optional<double> cosine;
  std::optional<double> jaccard;
  std::optional<double> pcc;
};

/// `domain` empty means the whole catalogue.
ReferenceSimilarities reference_similarities(const RatingStore& store, UserIndex a, UserIndex b,
                                             std::optional<DomainIndex> domain, const DomainMap& domains);

/// Influence weight of a neighbour: alpha * sim * xi for a trust-linked
/// neighbour, (1 - alpha) * sim * xi otherwise. Throws ParameterError when
/// alpha is outside [0, 1].
double influence(bool linked, double alpha, double sim, double xi);

/// Same, with linkage read from `graph` (an edge in either direction).
double influence(UserIndex source, UserIndex target, double alpha, const TrustGraph& graph, double sim,
                 double xi);

}  // namespace spmf
