#pragma once

// Residuals and social deviations at one point, shared by objective(),
// full_gradient() and the trainer so each epoch needs a single pass.

#include <vector>

#include "spmf/factor_model.hpp"
#include "spmf/objective.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/social_view.hpp"

namespace spmf::detail {

struct LossState {
  /// U_u.V_i - r_ui, in train.ratings() order.
  std::vector<double> residual;
  /// U_u - estimate(u); only filled when lambda_t != 0.
  FactorMatrix deviation;
};

LossState evaluate_state(const FactorModel& model, const RatingStore& train, const SocialView& social,
                         const Hyperparams& h);

double objective_from(const LossState& state, const FactorModel& model, const Hyperparams& h);

double squared_error_from(const LossState& state);

Gradient gradient_from(const LossState& state, const FactorModel& model, const RatingStore& train,
                       const SocialView& social, const Hyperparams& h);

}  // namespace spmf::detail
