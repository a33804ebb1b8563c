#include "spmf/influence_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <unordered_map>

#include "spmf/atomic_file.hpp"
#include "spmf/errors.hpp"
#include "spmf/similarity.hpp"
#include "text_io.hpp"

namespace spmf {

void InfluenceOptions::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (max_neighbors < 1) throw ParameterError("max_neighbors must be at least 1");
  if (min_overlap < 1) throw ParameterError("min_overlap must be at least 1");
}

InfluenceMatrix::InfluenceMatrix(std::size_t num_users, std::vector<std::string> domain_names,
                                 std::vector<std::vector<InfluenceEntry>> entries, InfluenceOptions options)
    : num_users_(num_users), names_(std::move(domain_names)), entries_(std::move(entries)), options_(options) {
  if (names_.size() != entries_.size()) throw ParameterError("one entry list per domain required");
  offsets_.resize(entries_.size());
  for (std::size_t d = 0; d < entries_.size(); ++d) {
    const auto& list = entries_[d];
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k].source >= num_users || list[k].target >= num_users) {
        throw DataError("influence entry user out of range");
      }
      if (k > 0) {
        const auto& p = list[k - 1];
        if (std::tie(p.target, p.source) >= std::tie(list[k].target, list[k].source)) {
          throw DataError("influence entries must be sorted by (target, source) without repeats");
        }
      }
    }
    auto& off = offsets_[d];
    off.assign(num_users + 1, 0);
    for (const auto& e : list) ++off[e.target + 1];
    for (std::size_t u = 0; u < num_users; ++u) off[u + 1] += off[u];
  }
}

InfluenceMatrix InfluenceMatrix::empty(std::size_t num_users, const DomainMap& domains) {
  return InfluenceMatrix(num_users, domains.names(),
                         std::vector<std::vector<InfluenceEntry>>(domains.num_domains()), {});
}

std::span<const InfluenceEntry> InfluenceMatrix::incoming(DomainIndex d, UserIndex u) const {
  if (u >= num_users_) return {};
  const auto& off = offsets_.at(d);
  return std::span(entries_[d]).subspan(off[u], off[u + 1] - off[u]);
}

std::size_t InfluenceMatrix::total_entries() const noexcept {
  std::size_t total = 0;
  for (const auto& list : entries_) total += list.size();
  return total;
}

namespace {

struct Candidate {
  UserIndex source;
  double weight;
};

void keep_strongest(std::vector<Candidate>& side, std::size_t cap) {
  auto stronger = [](const Candidate& a, const Candidate& b) {
    const double wa = std::abs(a.weight), wb = std::abs(b.weight);
    return wa != wb ? wa > wb : a.source < b.source;
  };
  if (side.size() > cap) {
    std::partial_sort(side.begin(), side.begin() + static_cast<std::ptrdiff_t>(cap), side.end(), stronger);
    side.resize(cap);
  }
}

// Scores every candidate source for the targets in [first, last) of domain d.
void build_range(const RatingStore& train, const TrustGraph& graph, const DomainProfiles& profiles,
                 const InfluenceOptions& opt, DomainIndex d, UserIndex first, UserIndex last,
                 std::vector<InfluenceEntry>& out) {
  const std::size_t m = train.num_users();
  std::vector<std::uint32_t> overlap(m, 0);
  std::vector<UserIndex> touched;
  std::vector<Candidate> linked, unlinked;

  for (UserIndex u = first; u < last; ++u) {
    const auto target = profiles.profile(u, d);
    if (target.ratings.empty()) continue;

    touched.clear();
    for (const auto& e : target.ratings) {
      for (const auto& rater : train.item_ratings(e.index)) {
        if (rater.index == u) continue;
        if (overlap[rater.index]++ == 0) touched.push_back(rater.index);
      }
    }
    std::sort(touched.begin(), touched.end());

    linked.clear();
    unlinked.clear();
    for (UserIndex v : touched) {
      const auto shared = overlap[v];
      overlap[v] = 0;
      if (shared < opt.min_overlap) continue;
      const auto source = profiles.profile(v, d);
      auto sim = pearson_on_shared(source.ratings, *source.mean, target.ratings, *target.mean);
      if (!sim) continue;
      const bool is_linked = graph.linked(v, u);
      const double t = influence(is_linked, opt.alpha, *sim, *source.experience);
      if (t == 0.0) continue;
      if (t < 0.0 && opt.negative_policy == NegativePolicy::drop) continue;
      (is_linked ? linked : unlinked).push_back({v, t});
    }
    keep_strongest(linked, opt.max_neighbors);
    keep_strongest(unlinked, opt.max_neighbors);

    const auto base = out.size();
    for (const auto& c : linked) out.push_back({c.source, u, c.weight});
    for (const auto& c : unlinked) out.push_back({c.source, u, c.weight});
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(base), out.end(),
              [](const InfluenceEntry& a, const InfluenceEntry& b) { return a.source < b.source; });
  }
}

}  // namespace

InfluenceMatrix build_influence_matrix(const RatingStore& train, const TrustGraph& graph,
                                       const DomainMap& domains, const InfluenceOptions& options) {
  options.validate();
  if (graph.num_users() != 0 && graph.num_users() != train.num_users()) {
    throw ParameterError("trust graph and rating store disagree on the number of users");
  }
  const DomainProfiles profiles(train, domains);
  const auto m = static_cast<UserIndex>(train.num_users());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, std::max<UserIndex>(m, 1)));

  std::vector<std::vector<InfluenceEntry>> per_domain(domains.num_domains());
  for (DomainIndex d = 0; d < domains.num_domains(); ++d) {
    if (workers == 1) {
      build_range(train, graph, profiles, options, d, 0, m, per_domain[d]);
      continue;
    }
    // Contiguous target ranges, concatenated in range order.
    std::vector<std::vector<InfluenceEntry>> parts(workers);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const auto first = static_cast<UserIndex>(static_cast<std::uint64_t>(m) * w / workers);
      const auto last = static_cast<UserIndex>(static_cast<std::uint64_t>(m) * (w + 1) / workers);
      pool.emplace_back([&, first, last, w] { build_range(train, graph, profiles, options, d, first, last, parts[w]); });
    }
    pool.clear();
    for (auto& part : parts) per_domain[d].insert(per_domain[d].end(), part.begin(), part.end());
  }
  return InfluenceMatrix(train.num_users(), domains.names(), std::move(per_domain), options);
}

std::string format_influence(const InfluenceMatrix& matrix, const IdMap& users) {
  std::string out;
  char buf[40];
  for (DomainIndex d = 0; d < matrix.num_domains(); ++d) {
    for (const auto& e : matrix.entries(d)) {
      std::snprintf(buf, sizeof buf, "%.12g", e.weight);
      out += matrix.domain_name(d);
      out += '\t';
      out += users.name(e.source);
      out += '\t';
      out += users.name(e.target);
      out += '\t';
      out += buf;
      out += '\n';
    }
  }
  return out;
}

void export_influence(const InfluenceMatrix& matrix, const IdMap& users, const std::filesystem::path& path) {
  write_file_atomic(path, format_influence(matrix, users));
}

InfluenceMatrix import_influence(const std::filesystem::path& path, const IdMap& users, const DomainMap& domains,
                                 const InfluenceOptions& options) {
  std::vector<std::vector<InfluenceEntry>> per_domain(domains.num_domains());
  detail::for_each_record(path, 4, [&](const auto& f, std::size_t lineno) {
    auto d = domains.find(std::string(f[0]));
    if (!d) throw DataError("unknown domain '" + std::string(f[0]) + "'", lineno);
    auto s = users.find(f[1]);
    auto t = users.find(f[2]);
    if (!s || !t) throw DataError("unknown user in influence entry", lineno);
    const double w = detail::parse_real(f[3], lineno);
    per_domain[*d].push_back({static_cast<UserIndex>(*s), static_cast<UserIndex>(*t), w});
  });
  for (auto& list : per_domain) {
    std::sort(list.begin(), list.end(), [](const InfluenceEntry& a, const InfluenceEntry& b) {
      return std::tie(a.target, a.source) < std::tie(b.target, b.source);
    });
  }
  return InfluenceMatrix(users.size(), domains.names(), std::move(per_domain), options);
}

}  // namespace spmf
