#include "spmf/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "spmf/errors.hpp"

namespace spmf {

namespace {

std::vector<IndexedRating> ratings_in_scope(const RatingStore& store, UserIndex u, std::optional<DomainIndex> d,
                                            const DomainMap& domains) {
  std::vector<IndexedRating> out;
  for (const auto& e : store.user_ratings(u)) {
    if (!d || domains.domain_of(e.index) == *d) out.push_back(e);
  }
  return out;
}

std::optional<double> mean_of(std::span<const IndexedRating> row) {
  if (row.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& e : row) sum += e.value;
  return sum / static_cast<double>(row.size());
}

std::size_t domain_rated_items(const RatingStore& store, DomainIndex d, const DomainMap& domains) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < store.num_items(); ++i) {
    if (domains.domain_of(static_cast<ItemIndex>(i)) == d && !store.item_ratings(static_cast<ItemIndex>(i)).empty()) {
      ++count;
    }
  }
  return count;
}

}  // namespace

DomainProfiles::DomainProfiles(const RatingStore& store, const DomainMap& domains)
    : rated_items_(domains.num_domains(), 0) {
  if (domains.num_items() != store.num_items()) {
    throw ParameterError("domain map does not cover the store's items");
  }
  for (std::size_t i = 0; i < store.num_items(); ++i) {
    if (!store.item_ratings(static_cast<ItemIndex>(i)).empty()) ++rated_items_[domains.domain_of(static_cast<ItemIndex>(i))];
  }

  ratings_.reserve(store.size());
  user_offsets_.reserve(store.num_users() + 1);
  user_offsets_.push_back(0);
  for (std::size_t u = 0; u < store.num_users(); ++u) {
    auto row = store.user_ratings(static_cast<UserIndex>(u));
    const auto base = ratings_.size();
    ratings_.insert(ratings_.end(), row.begin(), row.end());
    auto first = ratings_.begin() + static_cast<std::ptrdiff_t>(base);
    std::stable_sort(first, ratings_.end(), [&](const IndexedRating& x, const IndexedRating& y) {
      return domains.domain_of(x.index) < domains.domain_of(y.index);
    });
    for (auto k = base; k < ratings_.size();) {
      const DomainIndex d = domains.domain_of(ratings_[k].index);
      auto end = k;
      double sum = 0.0;
      while (end < ratings_.size() && domains.domain_of(ratings_[end].index) == d) sum += ratings_[end++].value;
      slices_.push_back({d, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(end),
                         sum / static_cast<double>(end - k)});
      k = end;
    }
    user_offsets_.push_back(slices_.size());
  }
}

DomainProfile DomainProfiles::profile(UserIndex u, DomainIndex d) const {
  if (u >= num_users()) return {};
  auto first = slices_.begin() + static_cast<std::ptrdiff_t>(user_offsets_[u]);
  auto last = slices_.begin() + static_cast<std::ptrdiff_t>(user_offsets_[u + 1]);
  auto it = std::lower_bound(first, last, d, [](const Slice& s, DomainIndex key) { return s.domain < key; });
  if (it == last || it->domain != d) return {};
  DomainProfile p;
  p.ratings = std::span(ratings_).subspan(it->begin, it->end - it->begin);
  p.mean = it->mean;
  p.experience = static_cast<double>(p.ratings.size()) / static_cast<double>(rated_items_[d]);
  return p;
}

std::size_t shared_count(std::span<const IndexedRating> a, std::span<const IndexedRating> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

std::optional<double> pearson_on_shared(std::span<const IndexedRating> a, double mean_a,
                                        std::span<const IndexedRating> b, double mean_b) {
  double num = 0.0, sa = 0.0, sb = 0.0;
  std::size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      const double da = ia->value - mean_a;
      const double db = ib->value - mean_b;
      num += da * db;
      sa += da * da;
      sb += db * db;
      ++shared;
      ++ia;
      ++ib;
    }
  }
  if (shared == 0 || sa == 0.0 || sb == 0.0) return std::nullopt;
  return std::clamp(num / (std::sqrt(sa) * std::sqrt(sb)), -1.0, 1.0);
}

std::optional<double> domain_mean(const RatingStore& store, UserIndex user, DomainIndex domain,
                                  const DomainMap& domains) {
  return mean_of(ratings_in_scope(store, user, domain, domains));
}

std::optional<double> pcc_domain_similarity(const RatingStore& store, UserIndex a, UserIndex b,
                                            DomainIndex domain, const DomainMap& domains) {
  auto ra = ratings_in_scope(store, a, domain, domains);
  auto rb = ratings_in_scope(store, b, domain, domains);
  auto ma = mean_of(ra);
  auto mb = mean_of(rb);
  if (!ma || !mb) return std::nullopt;
  return pearson_on_shared(ra, *ma, rb, *mb);
}

double experience(const RatingStore& store, UserIndex user, DomainIndex domain, const DomainMap& domains) {
  const auto own = ratings_in_scope(store, user, domain, domains).size();
  if (own == 0) {
    throw UndefinedExperience("user has no ratings in domain '" + domains.name(domain) + "'");
  }
  return static_cast<double>(own) / static_cast<double>(domain_rated_items(store, domain, domains));
}

ReferenceSimilarities reference_similarities(const RatingStore& store, UserIndex a, UserIndex b,
                                             std::optional<DomainIndex> domain, const DomainMap& domains) {
  auto ra = ratings_in_scope(store, a, domain, domains);
  auto rb = ratings_in_scope(store, b, domain, domains);
  if (ra.empty() || rb.empty()) return {};

  ReferenceSimilarities out;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& e : ra) na += e.value * e.value;
  for (const auto& e : rb) nb += e.value * e.value;
  std::size_t shared = 0;
  for (auto ia = ra.begin(), ib = rb.begin(); ia != ra.end() && ib != rb.end();) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      dot += ia->value * ib->value;
      ++shared;
      ++ia;
      ++ib;
    }
  }
  out.cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  out.jaccard = static_cast<double>(shared) / static_cast<double>(ra.size() + rb.size() - shared);
  out.pcc = pearson_on_shared(ra, *mean_of(ra), rb, *mean_of(rb));
  return out;
}

double influence(bool linked, double alpha, double sim, double xi) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  return (linked ? alpha : 1.0 - alpha) * sim * xi;
}

double influence(UserIndex source, UserIndex target, double alpha, const TrustGraph& graph, double sim,
                 double xi) {
  return influence(graph.linked(source, target), alpha, sim, xi);
}

}  // namespace spmf
