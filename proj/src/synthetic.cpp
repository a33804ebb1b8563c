#include "spmf/synthetic.hpp"

#include <random>

#include "spmf/atomic_file.hpp"
#include "spmf/errors.hpp"

namespace spmf {

Dataset generate_planted(const PlantedConfig& c, std::uint64_t seed) {
  if (c.users == 0 || c.communities == 0 || c.domains == 0 || c.items_per_domain == 0) {
    throw ParameterError("planted dataset dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> level(c.scale.min, c.scale.max);
  std::normal_distribution<double> noise(0.0, c.noise_sigma);

  const std::size_t n = c.domains * c.items_per_domain;
  auto users = std::make_shared<IdMap>();
  auto items = std::make_shared<IdMap>();
  for (std::size_t u = 0; u < c.users; ++u) users->intern("u" + std::to_string(u));
  for (std::size_t i = 0; i < n; ++i) items->intern("i" + std::to_string(i));

  std::vector<std::vector<double>> prefs(c.communities, std::vector<double>(n));
  for (auto& row : prefs)
    for (auto& x : row) x = level(rng);
  auto community = [&](std::size_t u) { return u * c.communities / c.users; };

  std::vector<Rating> ratings;
  std::uniform_int_distribution<std::size_t> any_item(0, n - 1);
  for (std::size_t u = 0; u < c.users; ++u) {
    const auto& pref = prefs[community(u)];
    auto emit = [&](std::size_t i) {
      ratings.push_back({static_cast<UserIndex>(u), static_cast<ItemIndex>(i), c.scale.clamp(pref[i] + noise(rng))});
    };
    const auto before = ratings.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (unit(rng) < c.rating_density) emit(i);
    }
    if (ratings.size() == before) emit(any_item(rng));
  }

  std::vector<std::pair<UserIndex, UserIndex>> edges;
  for (std::size_t a = 0; a < c.users; ++a) {
    for (std::size_t b = 0; b < c.users; ++b) {
      if (a == b) continue;
      const double p = community(a) == community(b) ? c.p_intra : c.p_inter;
      if (unit(rng) < p) edges.emplace_back(static_cast<UserIndex>(a), static_cast<UserIndex>(b));
    }
  }

  std::vector<std::string> names;
  for (std::size_t d = 0; d < c.domains; ++d) names.push_back("d" + std::to_string(d));
  std::vector<DomainIndex> assignment(n);
  for (std::size_t i = 0; i < n; ++i) assignment[i] = static_cast<DomainIndex>(i / c.items_per_domain);

  Dataset data{RatingStore(users, items, std::move(ratings), c.scale), TrustGraph(c.users, std::move(edges)),
               DomainMap(std::move(names), std::move(assignment))};
  return data;
}

void write_dataset(const Dataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_ratings(data.ratings, dir / "ratings.tsv");
  std::string trust;
  for (const auto& [a, b] : data.trust.edges()) {
    trust += data.ratings.users().name(a) + "\t" + data.ratings.users().name(b) + "\n";
  }
  write_file_atomic(dir / "trust.tsv", trust);
  std::string domains;
  for (std::size_t i = 0; i < data.domains.num_items(); ++i) {
    domains += data.ratings.items().name(i) + "\t" + data.domains.name(data.domains.domain_of(static_cast<ItemIndex>(i))) + "\n";
  }
  write_file_atomic(dir / "domains.tsv", domains);
}

}  // namespace spmf
