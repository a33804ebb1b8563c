#include "spmf/objective.hpp"

#include "loss_state.hpp"
#include "spmf/errors.hpp"

namespace spmf {

namespace detail {

LossState evaluate_state(const FactorModel& model, const RatingStore& train, const SocialView& social,
                         const Hyperparams& h) {
  if (train.num_users() > model.num_users() || train.num_items() > model.num_items()) {
    throw ParameterError("model is smaller than the rating store");
  }
  LossState state;
  auto ratings = train.ratings();
  state.residual.resize(ratings.size());
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    const auto& r = ratings[k];
    state.residual[k] = model.users.row(r.user).dot(model.items.row(r.item)) - r.value;
  }
  if (h.lambda_t != 0.0) {
    state.deviation = model.users;
    const auto m = static_cast<UserIndex>(model.num_users());
    for (UserIndex u = 0; u < m; ++u) {
      for (const auto& link : social.incoming(u)) {
        state.deviation.row(u) -= link.weight * model.users.row(link.user);
      }
    }
  }
  return state;
}

double squared_error_from(const LossState& state) {
  double sse = 0.0;
  for (double e : state.residual) sse += e * e;
  return sse;
}

double objective_from(const LossState& state, const FactorModel& model, const Hyperparams& h) {
  double value = 0.5 * squared_error_from(state);
  value += 0.5 * h.lambda_u * model.users.squaredNorm();
  value += 0.5 * h.lambda_v * model.items.squaredNorm();
  if (h.lambda_t != 0.0) value += 0.5 * h.lambda_t * state.deviation.squaredNorm();
  return value;
}

Gradient gradient_from(const LossState& state, const FactorModel& model, const RatingStore& train,
                       const SocialView& social, const Hyperparams& h) {
  Gradient g{FactorMatrix::Zero(model.users.rows(), model.users.cols()),
             FactorMatrix::Zero(model.items.rows(), model.items.cols())};
  auto ratings = train.ratings();
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    const auto& r = ratings[k];
    const double e = state.residual[k];
    g.users.row(r.user) += e * model.items.row(r.item);
    g.items.row(r.item) += e * model.users.row(r.user);
  }
  g.users += h.lambda_u * model.users;
  g.items += h.lambda_v * model.items;
  if (h.lambda_t != 0.0) {
    g.users += h.lambda_t * state.deviation;
    // U_u also appears inside the estimates of the users it influences.
    const auto m = static_cast<UserIndex>(model.num_users());
    for (UserIndex u = 0; u < m; ++u) {
      for (const auto& link : social.outgoing(u)) {
        g.users.row(u) -= (h.lambda_t * link.weight) * state.deviation.row(link.user);
      }
    }
  }
  return g;
}

}  // namespace detail

double objective(const FactorModel& model, const RatingStore& train, const SocialView& social,
                 const Hyperparams& h) {
  return detail::objective_from(detail::evaluate_state(model, train, social, h), model, h);
}

Gradient full_gradient(const FactorModel& model, const RatingStore& train, const SocialView& social,
                       const Hyperparams& h) {
  auto state = detail::evaluate_state(model, train, social, h);
  return detail::gradient_from(state, model, train, social, h);
}

Eigen::VectorXd gradient_u(const FactorModel& model, const RatingStore& train, const SocialView& social,
                           const Hyperparams& h, UserIndex u) {
  Eigen::VectorXd g = h.lambda_u * model.users.row(u).transpose();
  for (const auto& e : train.user_ratings(u)) {
    const double residual = model.users.row(u).dot(model.items.row(e.index)) - e.value;
    g += residual * model.items.row(e.index).transpose();
  }
  if (h.lambda_t != 0.0) {
    g += h.lambda_t * (model.users.row(u).transpose() - social.estimate(u, model.users));
    for (const auto& link : social.outgoing(u)) {
      const Eigen::VectorXd dev = model.users.row(link.user).transpose() - social.estimate(link.user, model.users);
      g -= h.lambda_t * link.weight * dev;
    }
  }
  return g;
}

Eigen::VectorXd gradient_v(const FactorModel& model, const RatingStore& train, const Hyperparams& h, ItemIndex i) {
  Eigen::VectorXd g = h.lambda_v * model.items.row(i).transpose();
  for (const auto& e : train.item_ratings(i)) {
    const double residual = model.users.row(e.index).dot(model.items.row(i)) - e.value;
    g += residual * model.users.row(e.index).transpose();
  }
  return g;
}

}  // namespace spmf
