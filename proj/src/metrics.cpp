#include "spmf/metrics.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "spmf/errors.hpp"

namespace spmf {

namespace {

void check_lengths(std::span<const double> p, std::span<const double> t) {
  if (p.empty() || t.empty()) throw ParameterError("metrics need at least one prediction");
  if (p.size() != t.size()) throw ParameterError("prediction and truth lists differ in length");
}

// Maps each index of `from` to the same id in `to`, if present.
std::vector<std::optional<std::size_t>> resolve(const IdMap& from, const std::shared_ptr<const IdMap>& to) {
  std::vector<std::optional<std::size_t>> out(from.size());
  for (std::size_t k = 0; k < from.size(); ++k) {
    if (to) out[k] = to->find(from.name(k));
  }
  return out;
}

}  // namespace

double mae(std::span<const double> predictions, std::span<const double> truths) {
  check_lengths(predictions, truths);
  double sum = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) sum += std::abs(predictions[k] - truths[k]);
  return sum / static_cast<double>(predictions.size());
}

double rmse(std::span<const double> predictions, std::span<const double> truths) {
  check_lengths(predictions, truths);
  double sum = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const double d = predictions[k] - truths[k];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predictions.size()));
}

EvalReport evaluate(const FactorModel& model, const RatingStore& test, bool clamp) {
  return evaluate(std::span(&model, 1), test, clamp);
}

EvalReport evaluate(std::span<const FactorModel> models, const RatingStore& test, bool clamp) {
  if (test.empty()) throw ParameterError("empty test set");
  if (models.empty()) throw ParameterError("no model to evaluate");

  struct Resolved {
    std::vector<std::optional<std::size_t>> users, items;
  };
  std::vector<Resolved> maps;
  for (const auto& model : models) {
    Resolved r;
    if (model.user_ids.get() != test.shared_users().get()) r.users = resolve(test.users(), model.user_ids);
    if (model.item_ids.get() != test.shared_items().get()) r.items = resolve(test.items(), model.item_ids);
    maps.push_back(std::move(r));
  }
  auto lookup = [](const std::vector<std::optional<std::size_t>>& table, std::size_t idx) -> std::optional<std::size_t> {
    if (table.empty()) return idx;
    return table[idx];
  };

  std::vector<double> preds, truths;
  preds.reserve(test.size());
  truths.reserve(test.size());
  const RatingScale scale = test.scale();
  for (const auto& r : test.ratings()) {
    double p = clamp ? scale.clamp(models[0].global_mean) : models[0].global_mean;
    for (std::size_t m = 0; m < models.size(); ++m) {
      auto item = lookup(maps[m].items, r.item);
      if (!item || !models[m].knows_item(*item)) continue;
      auto user = lookup(maps[m].users, r.user);
      p = user ? predict_or_fallback(models[m], *user, *item, clamp, scale)
               : (clamp ? scale.clamp(models[m].global_mean) : models[m].global_mean);
      break;
    }
    preds.push_back(p);
    truths.push_back(r.value);
  }

  EvalReport report;
  report.mae = mae(preds, truths);
  report.rmse = rmse(preds, truths);
  report.n_test = preds.size();
  if (report.mae > report.rmse * (1.0 + 1e-12) + 1e-300) {
    throw std::logic_error("MAE exceeds RMSE; metric computation is broken");
  }
  return report;
}

std::string to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["mae"] = report.mae;
  j["rmse"] = report.rmse;
  j["n_test"] = report.n_test;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  j["config"] = config;
  j["epoch_trace_path"] = report.epoch_trace_path.empty() ? nlohmann::ordered_json(nullptr)
                                                          : nlohmann::ordered_json(report.epoch_trace_path);
  return j.dump(2);
}

}  // namespace spmf
