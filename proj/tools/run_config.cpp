#include "run_config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "spmf/errors.hpp"

namespace spmf::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string absolute(const std::string& path) {
  if (path.empty()) return path;
  return std::filesystem::absolute(path).lexically_normal().string();
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::map<std::string, std::string> RunConfig::to_key_values() const {
  auto kv = describe(experiment);
  kv["ratings"] = absolute(ratings);
  if (!trust.empty()) kv["trust"] = absolute(trust);
  if (!domains.empty()) kv["domains"] = absolute(domains);
  kv["rating-min"] = num(rating_min);
  kv["rating-max"] = num(rating_max);
  kv["pmf"] = pmf ? "true" : "false";
  return kv;
}

std::string RunConfig::to_snapshot() const {
  std::string out = "# spmf run configuration\n";
  for (const auto& [k, v] : to_key_values()) {
    // describe() reports clamping as "clamp"; the flag is --no-clamp.
    if (k == "clamp") {
      out += "no-clamp=" + std::string(v == "true" ? "false" : "true") + "\n";
    } else {
      out += k + "=" + v + "\n";
    }
  }
  return out;
}

void add_data_options(CLI::App& app, RunConfig& c, bool need_trust) {
  app.add_option("--ratings", c.ratings, "Ratings file: user<TAB>item<TAB>rating")->required();
  auto* trust = app.add_option("--trust", c.trust, "Trust file: truster<TAB>trustee");
  if (need_trust) trust->required();
  app.add_option("--domains", c.domains, "Domain file: item<TAB>domain (omit for a single domain)");
  app.add_option("--rating-min", c.rating_min, "Lowest admissible rating");
  app.add_option("--rating-max", c.rating_max, "Highest admissible rating");
}

void add_influence_options(CLI::App& app, RunConfig& c) {
  auto& h = c.experiment.h;
  auto& inf = c.experiment.influence;
  app.add_option("--alpha", h.alpha, "Weight of trust-linked neighbours")->check(CLI::Range(0.0, 1.0));
  app.add_option_function<std::size_t>(
      "--max-neighbors",
      [&inf](std::size_t v) { inf.max_neighbors = v == 0 ? InfluenceOptions::kUnlimited : v; },
      "Per-side neighbour cap per target user (0 = unlimited)");
  app.add_option("--min-overlap", inf.min_overlap, "Co-rated domain items required to score a pair")
      ->check(CLI::PositiveNumber);
  app.add_option_function<std::string>(
         "--negative-policy",
         [&inf](const std::string& v) { inf.negative_policy = v == "keep" ? NegativePolicy::keep : NegativePolicy::drop; },
         "What to do with negative influence weights")
      ->check(CLI::IsMember({"drop", "keep"}));
}

void add_model_options(CLI::App& app, RunConfig& c) {
  auto& h = c.experiment.h;
  app.add_option("--k", h.k, "Latent factor dimension")->check(CLI::PositiveNumber);
  app.add_option("--lambda-u", h.lambda_u, "User factor ridge weight");
  app.add_option("--lambda-v", h.lambda_v, "Item factor ridge weight");
  app.add_option("--lambda-t", h.lambda_t, "Social regulariser weight");
  app.add_option("--gamma", h.learning_rate, "Learning rate");
  app.add_option("--epochs", h.epochs, "Training epochs")->check(CLI::PositiveNumber);
  app.add_option("--seed", h.seed, "Seed for the split and the factor initialisation");
  app.add_option("--init-sigma", h.init_sigma, "Standard deviation of the initial factors");
  app.add_option("--test-fraction", c.experiment.test_fraction, "Share of ratings held out");
  app.add_flag("--normalize-influence", h.normalize_influence_rows, "Divide each user's influence weights by their sum");
  app.add_flag_function(
      "--no-clamp", [&h](std::int64_t n) { h.clamp_predictions = n <= 0; }, "Do not clip predictions into the scale");
  app.add_option_function<std::string>(
         "--mode",
         [&c](const std::string& v) {
           c.experiment.mode = v == "per-domain" ? TrainingMode::per_domain : TrainingMode::merged;
         },
         "One model with merged influence, or one model per domain")
      ->check(CLI::IsMember({"merged", "per-domain"}));
  app.add_flag("--pmf", c.pmf, "Train the plain PMF baseline (lambda-t = 0, no influence)");
}

std::vector<std::string> config_file_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::vector<std::string> args;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("expected key=value in " + path, lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

}  // namespace spmf::cli
