#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "spmf/id_map.hpp"
#include "spmf/rating_store.hpp"

namespace spmf {

/// Rows are entities (users or items), columns latent factors.
using FactorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Hyperparams {
  double lambda_u = 0.005;
  double lambda_v = 0.005;
  /// Weight of the social term; 0 reduces the model to plain PMF.
  double lambda_t = 0.05;
  double alpha = 0.4;
  double learning_rate = 0.01;
  int epochs = 10;
  int k = 20;
  std::uint64_t seed = 1;
  double init_sigma = 0.1;
  bool clamp_predictions = true;
  bool normalize_influence_rows = false;

  /// Throws ParameterError on any out-of-range field.
  void validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// User and item factor matrices plus what is needed to serve predictions.
struct FactorModel {
  FactorMatrix users;  // m x K
  FactorMatrix items;  // n x K
  std::shared_ptr<const IdMap> user_ids;
  std::shared_ptr<const IdMap> item_ids;
  /// Entities seen in training. Empty vectors mean "all known".
  std::vector<char> known_users;
  std::vector<char> known_items;
  /// Fallback for cold-start predictions.
  double global_mean = 0.0;

  std::size_t num_users() const noexcept { return static_cast<std::size_t>(users.rows()); }
  std::size_t num_items() const noexcept { return static_cast<std::size_t>(items.rows()); }
  int k() const noexcept { return static_cast<int>(users.cols()); }

  bool knows_user(std::size_t u) const noexcept {
    return u < num_users() && (known_users.empty() || known_users[u]);
  }
  bool knows_item(std::size_t i) const noexcept {
    return i < num_items() && (known_items.empty() || known_items[i]);
  }
};

/// I.i.d. N(0, sigma^2) entries from a generator seeded with `seed`; users
/// are drawn first, row by row. sigma = 0 yields zero matrices.
FactorModel init_model(std::size_t m, std::size_t n, int k, std::uint64_t seed, double sigma);

/// Inner product of the user and item factors, optionally clamped into
/// `scale`. Throws ColdStart for an entity absent from training.
double predict(const FactorModel& model, std::size_t u, std::size_t i, bool clamp, RatingScale scale = {});

/// predict(), falling back to the (clamped) global training mean on cold start.
double predict_or_fallback(const FactorModel& model, std::size_t u, std::size_t i, bool clamp,
                           RatingScale scale = {});

}  // namespace spmf
