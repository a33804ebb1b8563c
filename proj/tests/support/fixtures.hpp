#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "spmf/domain_map.hpp"
#include "spmf/experiment.hpp"
#include "spmf/id_map.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/trust_graph.hpp"

namespace spmf::test {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("spmf-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Two users, ten items in three domains; 0 means "not rated".
//            music        movies     books
//   ua   4 2 5 0        0 0 0       5 4 5
//   ub   4 1 5 5        3 5 1       1 0 2
inline const std::vector<std::string>& toy_items() {
  static const std::vector<std::string> items{"m1", "m2", "m3", "m4", "v1", "v2", "v3", "b1", "b2", "b3"};
  return items;
}

inline std::vector<std::vector<double>> toy_matrix() {
  return {{4, 2, 5, 0, 0, 0, 0, 5, 4, 5}, {4, 1, 5, 5, 3, 5, 1, 1, 0, 2}};
}

inline std::string toy_domain_of(const std::string& item) {
  switch (item[0]) {
    case 'm': return "music";
    case 'v': return "movies";
    default: return "books";
  }
}

struct ToyFiles {
  fs::path ratings;
  fs::path trust;
  fs::path domains;
};

inline ToyFiles write_toy(const fs::path& dir, bool with_edge = true) {
  const auto r = toy_matrix();
  const char* users[] = {"ua", "ub"};
  std::string ratings, domains;
  for (int u = 0; u < 2; ++u) {
    for (std::size_t i = 0; i < toy_items().size(); ++i) {
      if (r[u][i] != 0) ratings += std::string(users[u]) + "\t" + toy_items()[i] + "\t" + std::to_string(int(r[u][i])) + "\n";
    }
  }
  for (const auto& item : toy_items()) domains += item + "\t" + toy_domain_of(item) + "\n";
  ToyFiles f{dir / "ratings.tsv", dir / "trust.tsv", dir / "domains.tsv"};
  write_text(f.ratings, ratings);
  write_text(f.trust, with_edge ? "ua\tub\n" : "");
  write_text(f.domains, domains);
  return f;
}

// A small dataset held densely (0 = missing) alongside its library form.
struct Instance {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t num_domains = 1;
  std::vector<std::vector<double>> r;
  std::vector<DomainIndex> domain;
  std::vector<std::pair<UserIndex, UserIndex>> edges;

  RatingStore store() const {
    auto users = std::make_shared<IdMap>();
    auto items = std::make_shared<IdMap>();
    for (std::size_t u = 0; u < m; ++u) users->intern("u" + std::to_string(u));
    for (std::size_t i = 0; i < n; ++i) items->intern("i" + std::to_string(i));
    std::vector<Rating> ratings;
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t i = 0; i < n; ++i) {
        if (r[u][i] != 0) ratings.push_back({UserIndex(u), ItemIndex(i), r[u][i]});
      }
    }
    return RatingStore(users, items, std::move(ratings));
  }

  DomainMap domains() const {
    std::vector<std::string> names;
    for (std::size_t d = 0; d < num_domains; ++d) names.push_back("d" + std::to_string(d));
    return DomainMap(names, domain);
  }

  TrustGraph graph() const { return TrustGraph(m, edges); }

  bool linked(UserIndex a, UserIndex b) const {
    for (const auto& [s, t] : edges) {
      if ((s == a && t == b) || (s == b && t == a)) return true;
    }
    return false;
  }
};

struct InstanceShape {
  std::size_t max_users = 10;
  std::size_t max_items = 10;
  std::size_t max_domains = 3;
  double density = 0.5;
  double edge_probability = 0.2;
  bool integer_ratings = true;
};

inline Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  Instance x;
  x.m = pick(2, shape.max_users);
  x.n = pick(2, shape.max_items);
  x.num_domains = pick(1, std::min(shape.max_domains, x.n));
  x.domain.resize(x.n);
  for (std::size_t i = 0; i < x.n; ++i) x.domain[i] = DomainIndex(i < x.num_domains ? i : pick(0, x.num_domains - 1));
  x.r.assign(x.m, std::vector<double>(x.n, 0.0));
  for (std::size_t u = 0; u < x.m; ++u) {
    for (std::size_t i = 0; i < x.n; ++i) {
      if (unit(rng) < shape.density) {
        x.r[u][i] = shape.integer_ratings ? double(pick(1, 5)) : 1.0 + 4.0 * unit(rng);
      }
    }
  }
  bool any = false;
  for (const auto& row : x.r) {
    for (double v : row) any = any || v != 0;
  }
  if (!any) x.r[0][0] = 3.0;
  for (UserIndex a = 0; a < x.m; ++a) {
    for (UserIndex b = 0; b < x.m; ++b) {
      if (a != b && unit(rng) < shape.edge_probability) x.edges.emplace_back(a, b);
    }
  }
  return x;
}

}  // namespace spmf::test
