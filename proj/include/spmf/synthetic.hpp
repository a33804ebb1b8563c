#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "spmf/experiment.hpp"

namespace spmf {

/// Users split evenly into communities that share item preferences within
/// each domain and trust each other far more often than outsiders.
struct PlantedConfig {
  std::size_t users = 200;
  std::size_t communities = 4;
  std::size_t domains = 3;
  std::size_t items_per_domain = 40;
  /// Probability that a user rated a given item.
  double rating_density = 0.1;
  double p_intra = 0.2;
  double p_inter = 0.005;
  double noise_sigma = 0.5;
  RatingScale scale;
};

/// Community c's expected rating of item i is drawn uniformly from the
/// scale; observed ratings add N(0, noise_sigma^2) and are clamped into the
/// scale. Trust edges are directed and drawn independently per ordered pair.
/// Every user rates at least one item.
Dataset generate_planted(const PlantedConfig& config, std::uint64_t seed);

/// ratings.tsv, trust.tsv and domains.tsv in `dir`.
void write_dataset(const Dataset& data, const std::filesystem::path& dir);

}  // namespace spmf
