#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "spmf/factor_model.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/social_view.hpp"

namespace spmf {

/// Regularised squared loss:
///   1/2 sum_(u,i) (r_ui - U_u.V_i)^2 + lambda_u/2 |U|^2 + lambda_v/2 |V|^2
///   + lambda_t/2 sum_u |U_u - sum_s t(s,u) U_s|^2
/// The social sum runs over every user, so a user without incoming links
/// is pulled toward zero.
double objective(const FactorModel& model, const RatingStore& train, const SocialView& social,
                 const Hyperparams& h);

/// Partial derivative of objective() with respect to user row `u`. Includes
/// the terms through which U_u enters the estimates of the users it
/// influences.
Eigen::VectorXd gradient_u(const FactorModel& model, const RatingStore& train, const SocialView& social,
                           const Hyperparams& h, UserIndex u);

/// Partial derivative of objective() with respect to item row `i`.
Eigen::VectorXd gradient_v(const FactorModel& model, const RatingStore& train, const Hyperparams& h, ItemIndex i);

struct Gradient {
  FactorMatrix users;
  FactorMatrix items;
};

/// Both gradients for every row in one pass over the ratings.
Gradient full_gradient(const FactorModel& model, const RatingStore& train, const SocialView& social,
                       const Hyperparams& h);

}  // namespace spmf
