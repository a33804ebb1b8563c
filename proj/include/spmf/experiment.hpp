#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spmf/domain_map.hpp"
#include "spmf/factor_model.hpp"
#include "spmf/influence_matrix.hpp"
#include "spmf/metrics.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/trainer.hpp"
#include "spmf/trust_graph.hpp"

namespace spmf {

struct Dataset {
  RatingStore ratings;
  TrustGraph trust;
  DomainMap domains;
};

enum class TrainingMode { merged, per_domain };

struct ExperimentConfig {
  /// h.alpha also drives the influence matrix; influence.alpha is ignored.
  Hyperparams h;
  InfluenceOptions influence;
  double test_fraction = 0.2;
  TrainingMode mode = TrainingMode::merged;
  /// Also train the lambda_t = 0 baseline on the same split.
  bool with_baseline = true;
};

std::map<std::string, std::string> describe(const ExperimentConfig& config);

struct ExperimentResult {
  EvalReport spmf;
  std::optional<EvalReport> pmf;
  std::vector<EpochStats> spmf_trace;
  std::vector<EpochStats> pmf_trace;
};

/// Splits with h.seed, builds influence on the train side, trains SPMF and
/// (optionally) the lambda_t = 0 baseline from the same seed, and scores
/// both on the held-out side with clamping per h.clamp_predictions.
ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config);

/// (baseline - ours) / baseline, in percent.
double improvement_pct(double baseline, double ours);
/// improvement_pct against the lowest of `baselines`.
double improvement_over_best(std::span<const double> baselines, double ours);

/// Two-line MAE/RMSE comparison in the layout of a baseline table row.
std::string format_comparison(const ExperimentResult& result, int k);

enum class SweepParam { lambda_u_v, lambda_t, alpha, k };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam param);

struct SweepCell {
  double value = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  double mae = 0.0;
  double rmse = 0.0;
  /// Non-empty when the cell failed; metrics are NaN then.
  std::string error;
};

struct SweepResult {
  SweepParam param;
  /// Ordered by (value position, seed position), independent of scheduling.
  std::vector<SweepCell> cells;
};

/// One SPMF experiment per (value, seed) cell; all other settings from
/// `base`. Cells run on up to `threads` workers. A failing cell records its
/// error and the sweep continues.
SweepResult sweep(const Dataset& data, const ExperimentConfig& base, SweepParam param, std::span<const double> values,
                  std::span<const std::uint64_t> seeds, unsigned threads = 1);

/// `param,value,K,seed,mae,rmse` CSV.
std::string format_sweep_csv(const SweepResult& result);

}  // namespace spmf
