#include "spmf/trainer.hpp"

#include <cmath>
#include <cstdio>

#include "loss_state.hpp"
#include "spmf/errors.hpp"

namespace spmf {

namespace {

FactorModel initial_model(const RatingStore& train, const Hyperparams& h) {
  if (train.empty()) throw ParameterError("cannot train on an empty rating store");
  FactorModel model = init_model(train.num_users(), train.num_items(), h.k, h.seed, h.init_sigma);
  model.user_ids = train.shared_users();
  model.item_ids = train.shared_items();
  model.known_users.assign(train.num_users(), 0);
  model.known_items.assign(train.num_items(), 0);
  for (const auto& r : train.ratings()) {
    model.known_users[r.user] = 1;
    model.known_items[r.item] = 1;
  }
  model.global_mean = train.mean();
  return model;
}

[[noreturn]] void diverged(int epoch) {
  throw DivergenceError("training diverged at epoch " + std::to_string(epoch) +
                            ": objective is no longer finite; try a smaller learning rate (--gamma)",
                        epoch);
}

double rmse_of(double sse, std::size_t n) { return std::sqrt(sse / static_cast<double>(n)); }

}  // namespace

TrainResult train(const RatingStore& train, const SocialView& social, const Hyperparams& h,
                  const EpochCallback& on_epoch) {
  h.validate();
  if (social.num_users() != 0 && social.num_users() != train.num_users()) {
    throw ParameterError("influence view and rating store disagree on the number of users");
  }
  TrainResult result{initial_model(train, h), 0.0, {}};
  FactorModel& model = result.model;

  auto state = detail::evaluate_state(model, train, social, h);
  result.initial_objective = detail::objective_from(state, model, h);

  for (int epoch = 1; epoch <= h.epochs; ++epoch) {
    const Gradient g = detail::gradient_from(state, model, train, social, h);
    model.users -= h.learning_rate * g.users;
    model.items -= h.learning_rate * g.items;

    state = detail::evaluate_state(model, train, social, h);
    EpochStats stats{epoch, detail::objective_from(state, model, h),
                     rmse_of(detail::squared_error_from(state), train.size())};
    if (!std::isfinite(stats.objective) || !model.users.allFinite() || !model.items.allFinite()) diverged(epoch);
    result.trace.push_back(stats);
    if (on_epoch) on_epoch(stats, model);
  }
  return result;
}

TrainResult train(const RatingStore& train_set, const InfluenceMatrix& influence, const Hyperparams& h,
                  const EpochCallback& on_epoch) {
  return train(train_set, SocialView::merged(influence, h.normalize_influence_rows), h, on_epoch);
}

TrainResult train_pmf(const RatingStore& train, const Hyperparams& h, const EpochCallback& on_epoch) {
  h.validate();
  TrainResult result{initial_model(train, h), 0.0, {}};
  FactorModel& model = result.model;
  const auto m = static_cast<UserIndex>(model.num_users());
  const auto n = static_cast<ItemIndex>(model.num_items());

  auto loss = [&](double& sse) {
    sse = 0.0;
    for (UserIndex u = 0; u < m; ++u) {
      for (const auto& e : train.user_ratings(u)) {
        const double err = e.value - model.users.row(u).dot(model.items.row(e.index));
        sse += err * err;
      }
    }
    return 0.5 * sse + 0.5 * h.lambda_u * model.users.squaredNorm() + 0.5 * h.lambda_v * model.items.squaredNorm();
  };
  double sse = 0.0;
  result.initial_objective = loss(sse);

  for (int epoch = 1; epoch <= h.epochs; ++epoch) {
    // Ascent direction on both sides, from the factors of the previous epoch.
    FactorMatrix step_u(model.users.rows(), model.users.cols());
    FactorMatrix step_v(model.items.rows(), model.items.cols());
    for (UserIndex u = 0; u < m; ++u) {
      Eigen::RowVectorXd s = -h.lambda_u * model.users.row(u);
      for (const auto& e : train.user_ratings(u)) {
        const double err = e.value - model.users.row(u).dot(model.items.row(e.index));
        s += err * model.items.row(e.index);
      }
      step_u.row(u) = s;
    }
    for (ItemIndex i = 0; i < n; ++i) {
      Eigen::RowVectorXd s = -h.lambda_v * model.items.row(i);
      for (const auto& e : train.item_ratings(i)) {
        const double err = e.value - model.users.row(e.index).dot(model.items.row(i));
        s += err * model.users.row(e.index);
      }
      step_v.row(i) = s;
    }
    model.users += h.learning_rate * step_u;
    model.items += h.learning_rate * step_v;

    EpochStats stats{epoch, loss(sse), 0.0};
    stats.train_rmse = rmse_of(sse, train.size());
    if (!std::isfinite(stats.objective)) diverged(epoch);
    result.trace.push_back(stats);
    if (on_epoch) on_epoch(stats, model);
  }
  return result;
}

std::vector<DomainModel> train_per_domain(const RatingStore& train_set, const InfluenceMatrix& influence,
                                          const DomainMap& domains, const Hyperparams& h) {
  if (influence.num_domains() != domains.num_domains()) {
    throw ParameterError("influence matrix and domain map disagree on the number of domains");
  }
  std::vector<std::vector<Rating>> by_domain(domains.num_domains());
  for (const auto& r : train_set.ratings()) by_domain[domains.domain_of(r.item)].push_back(r);

  std::vector<DomainModel> out;
  for (DomainIndex d = 0; d < domains.num_domains(); ++d) {
    if (by_domain[d].empty()) continue;
    const RatingStore sub = train_set.with_ratings(std::move(by_domain[d]));
    auto result = train(sub, SocialView::for_domain(influence, d, h.normalize_influence_rows), h);
    result.model.global_mean = train_set.mean();
    out.push_back({d, std::move(result)});
  }
  return out;
}

std::string format_trace(const std::vector<EpochStats>& trace) {
  std::string out = "epoch,objective,train_rmse\n";
  char buf[96];
  for (const auto& s : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", s.epoch, s.objective, s.train_rmse);
    out += buf;
  }
  return out;
}

}  // namespace spmf
