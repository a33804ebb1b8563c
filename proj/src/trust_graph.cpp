#include "spmf/trust_graph.hpp"

#include <algorithm>
#include <numeric>

#include "spmf/errors.hpp"
#include "text_io.hpp"

namespace spmf {

TrustGraph::TrustGraph(std::size_t num_users, std::vector<std::pair<UserIndex, UserIndex>> edges)
    : edges_(std::move(edges)) {
  for (const auto& [a, b] : edges_) {
    if (a >= num_users || b >= num_users) throw DataError("trust edge index out of range");
    if (a == b) throw DataError("self-loop on user index " + std::to_string(a));
  }
  std::sort(edges_.begin(), edges_.end());
  auto last = std::unique(edges_.begin(), edges_.end());
  duplicates_ = static_cast<std::size_t>(edges_.end() - last);
  edges_.erase(last, edges_.end());

  out_offsets_.assign(num_users + 1, 0);
  in_offsets_.assign(num_users + 1, 0);
  for (const auto& [a, b] : edges_) {
    ++out_offsets_[a + 1];
    ++in_offsets_[b + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  out_.resize(edges_.size());
  in_.resize(edges_.size());
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    out_[k] = edges_[k].second;
    in_[cursor[edges_[k].second]++] = edges_[k].first;
  }
}

std::span<const UserIndex> TrustGraph::trustees(UserIndex u) const {
  if (u >= num_users()) return {};
  return std::span(out_).subspan(out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]);
}

std::span<const UserIndex> TrustGraph::trusters(UserIndex u) const {
  if (u >= num_users()) return {};
  return std::span(in_).subspan(in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]);
}

bool TrustGraph::has_edge(UserIndex from, UserIndex to) const {
  auto row = trustees(from);
  return std::binary_search(row.begin(), row.end(), to);
}

TrustGraph load_trust(const std::filesystem::path& path, const IdMap& users) {
  std::vector<std::pair<UserIndex, UserIndex>> edges;
  std::size_t unknown = 0;
  detail::for_each_record(path, 2, [&](const auto& f, std::size_t lineno) {
    if (f[0] == f[1]) throw DataError("self-loop on user '" + std::string(f[0]) + "'", lineno);
    auto a = users.find(f[0]);
    auto b = users.find(f[1]);
    if (!a || !b) {
      ++unknown;
      return;
    }
    edges.emplace_back(static_cast<UserIndex>(*a), static_cast<UserIndex>(*b));
  });
  TrustGraph graph(users.size(), std::move(edges));
  graph.unknown_ = unknown;
  return graph;
}

}  // namespace spmf
