#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "spmf/factor_model.hpp"
#include "spmf/rating_store.hpp"

namespace spmf {

/// Mean absolute error. Throws ParameterError on empty or mismatched input.
double mae(std::span<const double> predictions, std::span<const double> truths);
/// Root mean squared error. Same preconditions as mae().
double rmse(std::span<const double> predictions, std::span<const double> truths);

struct EvalReport {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n_test = 0;
  /// Flat key/value snapshot of the run that produced the model.
  std::map<std::string, std::string> config;
  std::string epoch_trace_path;
};

/// Scores every rating of `test`. Users and items are matched to the model
/// by id; anything the model did not see in training gets the global-mean
/// fallback. Throws ParameterError("empty test set") when `test` is empty.
EvalReport evaluate(const FactorModel& model, const RatingStore& test, bool clamp);

/// Per-domain ensemble: each item is scored by the model that knows it.
EvalReport evaluate(std::span<const FactorModel> models, const RatingStore& test, bool clamp);

/// {mae, rmse, n_test, config, epoch_trace_path}, keys in that order.
std::string to_json(const EvalReport& report);

}  // namespace spmf
