#include "spmf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "spmf/errors.hpp"
#include "spmf/social_view.hpp"

namespace spmf {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Trained {
  std::vector<FactorModel> models;
  std::vector<EpochStats> trace;
};

Trained fit(const RatingStore& train_set, const TrustGraph& trust, const DomainMap& domains,
            const ExperimentConfig& config, const Hyperparams& h) {
  InfluenceOptions opts = config.influence;
  opts.alpha = h.alpha;
  Trained out;
  if (config.mode == TrainingMode::merged) {
    SocialView view;
    if (h.lambda_t != 0.0) {
      view = SocialView::merged(build_influence_matrix(train_set, trust, domains, opts), h.normalize_influence_rows);
    }
    auto result = train(train_set, view, h);
    out.models.push_back(std::move(result.model));
    out.trace = std::move(result.trace);
  } else {
    const auto influence = h.lambda_t != 0.0 ? build_influence_matrix(train_set, trust, domains, opts)
                                             : InfluenceMatrix::empty(train_set.num_users(), domains);
    for (auto& dm : train_per_domain(train_set, influence, domains, h)) {
      out.models.push_back(std::move(dm.result.model));
    }
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> describe(const ExperimentConfig& c) {
  return {
      {"k", std::to_string(c.h.k)},
      {"lambda-u", num(c.h.lambda_u)},
      {"lambda-v", num(c.h.lambda_v)},
      {"lambda-t", num(c.h.lambda_t)},
      {"alpha", num(c.h.alpha)},
      {"gamma", num(c.h.learning_rate)},
      {"epochs", std::to_string(c.h.epochs)},
      {"seed", std::to_string(c.h.seed)},
      {"init-sigma", num(c.h.init_sigma)},
      {"clamp", c.h.clamp_predictions ? "true" : "false"},
      {"normalize-influence", c.h.normalize_influence_rows ? "true" : "false"},
      {"test-fraction", num(c.test_fraction)},
      {"max-neighbors", c.influence.max_neighbors == InfluenceOptions::kUnlimited
                            ? std::string("0")
                            : std::to_string(c.influence.max_neighbors)},
      {"min-overlap", std::to_string(c.influence.min_overlap)},
      {"negative-policy", c.influence.negative_policy == NegativePolicy::drop ? "drop" : "keep"},
      {"mode", c.mode == TrainingMode::merged ? "merged" : "per-domain"},
  };
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config) {
  config.h.validate();
  const Split parts = split(data.ratings, config.test_fraction, config.h.seed);

  ExperimentResult result;
  auto spmf = fit(parts.train, data.trust, data.domains, config, config.h);
  result.spmf = evaluate(spmf.models, parts.test, config.h.clamp_predictions);
  result.spmf.config = describe(config);
  result.spmf_trace = std::move(spmf.trace);

  if (config.with_baseline) {
    Hyperparams base = config.h;
    base.lambda_t = 0.0;
    auto pmf = fit(parts.train, data.trust, data.domains, config, base);
    result.pmf = evaluate(pmf.models, parts.test, base.clamp_predictions);
    result.pmf->config = describe(config);
    result.pmf->config["lambda-t"] = num(0.0);
    if (config.h.lambda_t == 0.0) result.pmf->config = result.spmf.config;
    result.pmf_trace = std::move(pmf.trace);
  }
  return result;
}

double improvement_pct(double baseline, double ours) { return 100.0 * (baseline - ours) / baseline; }

double improvement_over_best(std::span<const double> baselines, double ours) {
  if (baselines.empty()) throw ParameterError("no baseline values");
  return improvement_pct(*std::min_element(baselines.begin(), baselines.end()), ours);
}

std::string format_comparison(const ExperimentResult& result, int k) {
  std::string out = "K\tIndicator\tPMF\tSPMF\tAccuracy improvement\n";
  char buf[160];
  auto row = [&](const char* name, double pmf, double ours) {
    std::snprintf(buf, sizeof buf, "K=%d\t%s\t%.3f\t%.3f\t%.2f%%\n", k, name, pmf, ours, improvement_pct(pmf, ours));
    out += buf;
  };
  if (!result.pmf) throw ParameterError("comparison requires a baseline report");
  row("MAE", result.pmf->mae, result.spmf.mae);
  row("RMSE", result.pmf->rmse, result.spmf.rmse);
  return out;
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "lambda_u_v" || name == "lambda-u-v") return SweepParam::lambda_u_v;
  if (name == "lambda_t" || name == "lambda-t") return SweepParam::lambda_t;
  if (name == "alpha") return SweepParam::alpha;
  if (name == "K" || name == "k") return SweepParam::k;
  throw ParameterError("unknown sweep parameter '" + name + "' (expected lambda_u_v, lambda_t, alpha or K)");
}

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::lambda_u_v: return "lambda_u_v";
    case SweepParam::lambda_t: return "lambda_t";
    case SweepParam::alpha: return "alpha";
    case SweepParam::k: return "K";
  }
  return "?";
}

SweepResult sweep(const Dataset& data, const ExperimentConfig& base, SweepParam param, std::span<const double> values,
                  std::span<const std::uint64_t> seeds, unsigned threads) {
  if (values.empty()) throw ParameterError("sweep needs at least one value");
  const std::vector<std::uint64_t> seed_list =
      seeds.empty() ? std::vector<std::uint64_t>{base.h.seed} : std::vector<std::uint64_t>(seeds.begin(), seeds.end());

  SweepResult result{param, std::vector<SweepCell>(values.size() * seed_list.size())};
  auto run_cell = [&](std::size_t idx) {
    SweepCell& cell = result.cells[idx];
    cell.value = values[idx / seed_list.size()];
    cell.seed = seed_list[idx % seed_list.size()];
    ExperimentConfig config = base;
    config.with_baseline = false;
    config.h.seed = cell.seed;
    switch (param) {
      case SweepParam::lambda_u_v: config.h.lambda_u = config.h.lambda_v = cell.value; break;
      case SweepParam::lambda_t: config.h.lambda_t = cell.value; break;
      case SweepParam::alpha: config.h.alpha = cell.value; break;
      case SweepParam::k: config.h.k = static_cast<int>(std::lround(cell.value)); break;
    }
    cell.k = config.h.k;
    try {
      if (param == SweepParam::k && static_cast<double>(config.h.k) != cell.value) {
        throw ParameterError("K must be a whole number");
      }
      const auto report = run_experiment(data, config).spmf;
      cell.mae = report.mae;
      cell.rmse = report.rmse;
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.mae = cell.rmse = std::numeric_limits<double>::quiet_NaN();
    }
  };

  const std::size_t total = result.cells.size();
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx = next++; idx < total; idx = next++) run_cell(idx);
      });
    }
  }
  return result;
}

std::string format_sweep_csv(const SweepResult& result) {
  std::string out = "param,value,K,seed,mae,rmse\n";
  const std::string name = to_string(result.param);
  for (const auto& c : result.cells) {
    out += name + "," + num(c.value) + "," + std::to_string(c.k) + "," + std::to_string(c.seed) + "," +
           (c.error.empty() ? num(c.mae) : "nan") + "," + (c.error.empty() ? num(c.rmse) : "nan") + "\n";
  }
  return out;
}

}  // namespace spmf
