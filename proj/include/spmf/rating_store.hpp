#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "spmf/id_map.hpp"

namespace spmf {

using UserIndex = std::uint32_t;
using ItemIndex = std::uint32_t;

struct RatingScale {
  double min = 1.0;
  double max = 5.0;

  bool contains(double r) const noexcept { return r >= min && r <= max; }
  double clamp(double r) const noexcept { return r < min ? min : (r > max ? max : r); }
};

struct Rating {
  UserIndex user;
  ItemIndex item;
  double value;

  friend bool operator==(const Rating&, const Rating&) = default;
};

/// One side of a sparse index row: the other coordinate plus the rating.
struct IndexedRating {
  std::uint32_t index;
  double value;
};

/// Immutable sparse user x item rating matrix.
///
/// Ratings are stored once, sorted by (user, item), with a CSR view per user
/// and a CSC view per item. User and item id maps are shared between stores
/// derived from one another (e.g. a train/test split) so that indices agree.
class RatingStore {
 public:
  RatingStore();

  /// Validates and indexes `ratings`. Throws DataError on a duplicate
  /// (user, item) pair, an out-of-scale rating, or an out-of-range index.
  RatingStore(std::shared_ptr<const IdMap> users, std::shared_ptr<const IdMap> items,
              std::vector<Rating> ratings, RatingScale scale = {});

  std::size_t num_users() const noexcept { return users_->size(); }
  std::size_t num_items() const noexcept { return items_->size(); }
  std::size_t size() const noexcept { return ratings_.size(); }
  bool empty() const noexcept { return ratings_.empty(); }

  const RatingScale& scale() const noexcept { return scale_; }
  const IdMap& users() const noexcept { return *users_; }
  const IdMap& items() const noexcept { return *items_; }
  const std::shared_ptr<const IdMap>& shared_users() const noexcept { return users_; }
  const std::shared_ptr<const IdMap>& shared_items() const noexcept { return items_; }

  /// All ratings sorted by (user, item).
  std::span<const Rating> ratings() const noexcept { return ratings_; }

  /// Items rated by `u`, ascending by item index.
  std::span<const IndexedRating> user_ratings(UserIndex u) const;
  /// Users who rated `i`, ascending by user index.
  std::span<const IndexedRating> item_ratings(ItemIndex i) const;

  /// Rating of (u, i) if present.
  const double* find(UserIndex u, ItemIndex i) const;

  double mean() const noexcept;

  /// A store over the same id maps holding a subset of the ratings.
  RatingStore with_ratings(std::vector<Rating> ratings) const;

 private:
  std::shared_ptr<const IdMap> users_;
  std::shared_ptr<const IdMap> items_;
  RatingScale scale_;
  std::vector<Rating> ratings_;
  std::vector<std::size_t> user_offsets_;
  std::vector<IndexedRating> by_user_;
  std::vector<std::size_t> item_offsets_;
  std::vector<IndexedRating> by_item_;
};

/// Reads `user<TAB>item<TAB>rating` lines. Blank lines and lines starting
/// with '#' are skipped. A rating of 0 is rejected like any other value
/// outside `scale`.
RatingStore load_ratings(const std::filesystem::path& path, RatingScale scale = {});

/// Same as load_ratings but resolves ids against existing maps, extending
/// copies of them with unseen ids. Used to read a held-out file against the
/// id space of a trained model.
RatingStore load_ratings(const std::filesystem::path& path, const IdMap& users,
                         const IdMap& items, RatingScale scale = {});

/// Writes the store in the canonical tab-separated format, ordered by
/// (user, item) index, ratings printed with round-trip precision.
void write_ratings(const RatingStore& store, const std::filesystem::path& path);

struct Split {
  RatingStore train;
  RatingStore test;
};

/// Seeded uniform rating-level holdout. The test side receives
/// floor(size * test_fraction) ratings; both sides share the store's id maps.
Split split(const RatingStore& store, double test_fraction, std::uint64_t seed);

}  // namespace spmf
