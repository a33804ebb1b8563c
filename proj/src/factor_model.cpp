#include "spmf/factor_model.hpp"

#include <cmath>
#include <random>

#include "spmf/errors.hpp"

namespace spmf {

void Hyperparams::validate() const {
  auto nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!nonneg(lambda_u) || !nonneg(lambda_v) || !nonneg(lambda_t)) {
    throw ParameterError("regularisation weights must be finite and non-negative");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ParameterError("learning rate must be positive");
  if (epochs < 1) throw ParameterError("epochs must be positive");
  if (k < 1) throw ParameterError("K must be positive");
  if (!nonneg(init_sigma)) throw ParameterError("init sigma must be non-negative");
}

FactorModel init_model(std::size_t m, std::size_t n, int k, std::uint64_t seed, double sigma) {
  if (m == 0 || n == 0 || k < 1) throw ParameterError("model dimensions must be positive");
  if (!(sigma >= 0.0)) throw ParameterError("init sigma must be non-negative");
  FactorModel model;
  model.users = FactorMatrix::Zero(static_cast<Eigen::Index>(m), k);
  model.items = FactorMatrix::Zero(static_cast<Eigen::Index>(n), k);
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (Eigen::Index r = 0; r < model.users.rows(); ++r)
      for (Eigen::Index c = 0; c < k; ++c) model.users(r, c) = gauss(rng);
    for (Eigen::Index r = 0; r < model.items.rows(); ++r)
      for (Eigen::Index c = 0; c < k; ++c) model.items(r, c) = gauss(rng);
  }
  return model;
}

double predict(const FactorModel& model, std::size_t u, std::size_t i, bool clamp, RatingScale scale) {
  if (!model.knows_user(u)) throw ColdStart("user index " + std::to_string(u) + " unknown to the model");
  if (!model.knows_item(i)) throw ColdStart("item index " + std::to_string(i) + " unknown to the model");
  const double raw = model.users.row(static_cast<Eigen::Index>(u)).dot(model.items.row(static_cast<Eigen::Index>(i)));
  return clamp ? scale.clamp(raw) : raw;
}

double predict_or_fallback(const FactorModel& model, std::size_t u, std::size_t i, bool clamp, RatingScale scale) {
  if (!model.knows_user(u) || !model.knows_item(i)) {
    return clamp ? scale.clamp(model.global_mean) : model.global_mean;
  }
  return predict(model, u, i, clamp, scale);
}

}  // namespace spmf
