#pragma once

#include <cstddef>
#include <string>

#include "spmf/rating_store.hpp"
#include "spmf/trust_graph.hpp"

namespace spmf {

struct DatasetStats {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t rating_count = 0;
  std::size_t trust_edge_count = 0;
  double rating_sparsity = 1.0;
  double trust_sparsity = 1.0;
};

/// Sparsity = 1 - observed / possible. An empty matrix is reported fully
/// sparse (1.0).
DatasetStats compute_stats(std::size_t m, std::size_t n, std::size_t ratings, std::size_t edges);
DatasetStats stats(const RatingStore& store, const TrustGraph& graph);

std::string to_json(const DatasetStats& s);

}  // namespace spmf
