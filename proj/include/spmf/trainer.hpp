#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spmf/domain_map.hpp"
#include "spmf/factor_model.hpp"
#include "spmf/influence_matrix.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/social_view.hpp"

namespace spmf {

struct EpochStats {
  int epoch = 0;  // 1-based
  double objective = 0.0;
  double train_rmse = 0.0;
};

struct TrainResult {
  FactorModel model;
  double initial_objective = 0.0;
  std::vector<EpochStats> trace;
};

using EpochCallback = std::function<void(const EpochStats&, const FactorModel&)>;

/// Full-batch gradient descent: every epoch computes the exact gradient of
/// objective() for all user and item rows from the current factors, then
/// steps all rows at once. Factors are initialised with init_model() over
/// the store's id space. Throws DivergenceError if the objective stops
/// being finite.
TrainResult train(const RatingStore& train, const SocialView& social, const Hyperparams& h,
                  const EpochCallback& on_epoch = {});

/// Uses the merged view of `influence`, normalised per h.normalize_influence_rows.
TrainResult train(const RatingStore& train, const InfluenceMatrix& influence, const Hyperparams& h,
                  const EpochCallback& on_epoch = {});

/// Plain PMF with the same initialisation and step rule, written without
/// any social machinery. lambda_t is ignored.
TrainResult train_pmf(const RatingStore& train, const Hyperparams& h, const EpochCallback& on_epoch = {});

struct DomainModel {
  DomainIndex domain;
  TrainResult result;
};

/// One model per domain with training ratings, each fitted to that domain's
/// ratings and influence entries. Each model knows only its own domain's
/// items; the cold-start fallback is the mean over all of `train`.
std::vector<DomainModel> train_per_domain(const RatingStore& train, const InfluenceMatrix& influence,
                                          const DomainMap& domains, const Hyperparams& h);

/// `epoch,objective,train_rmse` CSV with round-trip precision.
std::string format_trace(const std::vector<EpochStats>& trace);

}  // namespace spmf
