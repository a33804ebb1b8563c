#include "spmf/dataset_stats.hpp"

#include <nlohmann/json.hpp>

namespace spmf {

DatasetStats compute_stats(std::size_t m, std::size_t n, std::size_t ratings, std::size_t edges) {
  DatasetStats s{m, n, ratings, edges, 1.0, 1.0};
  const double cells = static_cast<double>(m) * static_cast<double>(n);
  const double pairs = static_cast<double>(m) * static_cast<double>(m);
  if (cells > 0) s.rating_sparsity = 1.0 - static_cast<double>(ratings) / cells;
  if (pairs > 0) s.trust_sparsity = 1.0 - static_cast<double>(edges) / pairs;
  return s;
}

DatasetStats stats(const RatingStore& store, const TrustGraph& graph) {
  return compute_stats(store.num_users(), store.num_items(), store.size(), graph.num_edges());
}

std::string to_json(const DatasetStats& s) {
  nlohmann::ordered_json j;
  j["m"] = s.m;
  j["n"] = s.n;
  j["rating_count"] = s.rating_count;
  j["trust_edge_count"] = s.trust_edge_count;
  j["rating_sparsity"] = s.rating_sparsity;
  j["trust_sparsity"] = s.trust_sparsity;
  return j.dump(2);
}

}  // namespace spmf
