#pragma once

#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spmf/experiment.hpp"

namespace spmf::cli {

/// Everything a command needs to re-execute a run. Keys of to_key_values()
/// are the long flag names, so a snapshot can be fed back via --config.
struct RunConfig {
  std::string ratings;
  std::string trust;
  std::string domains;
  std::string out;
  double rating_min = 1.0;
  double rating_max = 5.0;
  ExperimentConfig experiment;
  bool pmf = false;

  /// Output directory is excluded: a snapshot describes the computation,
  /// not where its results land.
  std::map<std::string, std::string> to_key_values() const;
  std::string to_snapshot() const;
};

void add_data_options(CLI::App& app, RunConfig& config, bool need_trust);
void add_influence_options(CLI::App& app, RunConfig& config);
void add_model_options(CLI::App& app, RunConfig& config);

/// Turns `key=value` lines of a config file into `--key=value` arguments.
/// Blank lines and lines starting with '#' are ignored.
std::vector<std::string> config_file_arguments(const std::string& path);

}  // namespace spmf::cli
