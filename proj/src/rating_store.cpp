#include "spmf/rating_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "spmf/atomic_file.hpp"
#include "spmf/errors.hpp"
#include "text_io.hpp"

namespace spmf {

RatingStore::RatingStore() : RatingStore(std::make_shared<IdMap>(), std::make_shared<IdMap>(), {}) {}

RatingStore::RatingStore(std::shared_ptr<const IdMap> users, std::shared_ptr<const IdMap> items,
                         std::vector<Rating> ratings, RatingScale scale)
    : users_(std::move(users)), items_(std::move(items)), scale_(scale), ratings_(std::move(ratings)) {
  if (!(scale_.min < scale_.max)) throw ParameterError("rating scale requires min < max");
  const std::size_t m = users_->size();
  const std::size_t n = items_->size();
  std::sort(ratings_.begin(), ratings_.end(), [](const Rating& a, const Rating& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  });
  for (std::size_t k = 0; k < ratings_.size(); ++k) {
    const auto& r = ratings_[k];
    if (r.user >= m || r.item >= n) throw DataError("rating index out of range");
    if (!scale_.contains(r.value) || !std::isfinite(r.value)) {
      throw DataError("rating " + std::to_string(r.value) + " for (" + users_->name(r.user) + ", " +
                      items_->name(r.item) + ") outside scale");
    }
    if (k > 0 && ratings_[k - 1].user == r.user && ratings_[k - 1].item == r.item) {
      throw DataError("duplicate rating for (" + users_->name(r.user) + ", " + items_->name(r.item) + ")");
    }
  }

  user_offsets_.assign(m + 1, 0);
  item_offsets_.assign(n + 1, 0);
  for (const auto& r : ratings_) {
    ++user_offsets_[r.user + 1];
    ++item_offsets_[r.item + 1];
  }
  std::partial_sum(user_offsets_.begin(), user_offsets_.end(), user_offsets_.begin());
  std::partial_sum(item_offsets_.begin(), item_offsets_.end(), item_offsets_.begin());

  by_user_.resize(ratings_.size());
  by_item_.resize(ratings_.size());
  std::vector<std::size_t> cursor(item_offsets_.begin(), item_offsets_.end() - 1);
  for (std::size_t k = 0; k < ratings_.size(); ++k) {
    const auto& r = ratings_[k];
    by_user_[k] = {r.item, r.value};
    // ratings_ is user-major, so each item row fills in ascending user order
    by_item_[cursor[r.item]++] = {r.user, r.value};
  }
}

std::span<const IndexedRating> RatingStore::user_ratings(UserIndex u) const {
  if (u >= num_users()) return {};
  return std::span(by_user_).subspan(user_offsets_[u], user_offsets_[u + 1] - user_offsets_[u]);
}

std::span<const IndexedRating> RatingStore::item_ratings(ItemIndex i) const {
  if (i >= num_items()) return {};
  return std::span(by_item_).subspan(item_offsets_[i], item_offsets_[i + 1] - item_offsets_[i]);
}

const double* RatingStore::find(UserIndex u, ItemIndex i) const {
  auto row = user_ratings(u);
  auto it = std::lower_bound(row.begin(), row.end(), i,
                             [](const IndexedRating& e, ItemIndex key) { return e.index < key; });
  return (it != row.end() && it->index == i) ? &it->value : nullptr;
}

double RatingStore::mean() const noexcept {
  if (ratings_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : ratings_) sum += r.value;
  return sum / static_cast<double>(ratings_.size());
}

RatingStore RatingStore::with_ratings(std::vector<Rating> ratings) const {
  return RatingStore(users_, items_, std::move(ratings), scale_);
}

namespace {

RatingStore load_into(const std::filesystem::path& path, std::shared_ptr<IdMap> users,
                      std::shared_ptr<IdMap> items, RatingScale scale) {
  std::vector<Rating> ratings;
  std::vector<std::size_t> lines;
  detail::for_each_record(path, 3, [&](const auto& f, std::size_t lineno) {
    double value = detail::parse_real(f[2], lineno);
    if (!scale.contains(value) || !std::isfinite(value)) {
      throw DataError("rating " + std::string(f[2]) + " outside scale [" + std::to_string(scale.min) + ", " +
                          std::to_string(scale.max) + "]",
                      lineno);
    }
    auto u = static_cast<UserIndex>(users->intern(f[0]));
    auto i = static_cast<ItemIndex>(items->intern(f[1]));
    ratings.push_back({u, i, value});
    lines.push_back(lineno);
  });
  // Report duplicates with the line of the second occurrence.
  std::vector<std::size_t> order(ratings.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &ra = ratings[a], &rb = ratings[b];
    return ra.user != rb.user ? ra.user < rb.user : ra.item < rb.item;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = ratings[order[k - 1]];
    const auto& cur = ratings[order[k]];
    if (prev.user == cur.user && prev.item == cur.item) {
      throw DataError("duplicate rating for (" + users->name(cur.user) + ", " + items->name(cur.item) + ")",
                      lines[order[k]]);
    }
  }
  return RatingStore(std::move(users), std::move(items), std::move(ratings), scale);
}

}  // namespace

RatingStore load_ratings(const std::filesystem::path& path, RatingScale scale) {
  return load_into(path, std::make_shared<IdMap>(), std::make_shared<IdMap>(), scale);
}

RatingStore load_ratings(const std::filesystem::path& path, const IdMap& users, const IdMap& items,
                         RatingScale scale) {
  return load_into(path, std::make_shared<IdMap>(users), std::make_shared<IdMap>(items), scale);
}

void write_ratings(const RatingStore& store, const std::filesystem::path& path) {
  std::string out;
  out.reserve(store.size() * 16);
  char buf[32];
  for (const auto& r : store.ratings()) {
    out += store.users().name(r.user);
    out += '\t';
    out += store.items().name(r.item);
    out += '\t';
    auto res = std::to_chars(buf, buf + sizeof buf, r.value);
    out.append(buf, res.ptr);
    out += '\n';
  }
  write_file_atomic(path, out);
}

Split split(const RatingStore& store, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("test fraction must lie in (0, 1)");
  }
  if (store.empty()) throw ParameterError("cannot split an empty rating store");
  const std::size_t total = store.size();
  // Rounds toward train; the epsilon absorbs products like 0.2 * 100.
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(total) * test_fraction + 1e-9));

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> in_test(total, false);
  for (std::size_t k = 0; k < n_test; ++k) in_test[order[k]] = true;

  std::vector<Rating> train, test;
  train.reserve(total - n_test);
  test.reserve(n_test);
  auto all = store.ratings();
  for (std::size_t k = 0; k < total; ++k) (in_test[k] ? test : train).push_back(all[k]);
  return {store.with_ratings(std::move(train)), store.with_ratings(std::move(test))};
}

}  // namespace spmf
