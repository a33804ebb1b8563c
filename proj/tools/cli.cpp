#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <thread>

#include <nlohmann/json.hpp>

#include "run_config.hpp"
#include "spmf/atomic_file.hpp"
#include "spmf/dataset_stats.hpp"
#include "spmf/domain_map.hpp"
#include "spmf/errors.hpp"
#include "spmf/experiment.hpp"
#include "spmf/influence_matrix.hpp"
#include "spmf/metrics.hpp"
#include "spmf/model_io.hpp"
#include "spmf/similarity.hpp"
#include "spmf/synthetic.hpp"
#include "spmf/trainer.hpp"

namespace spmf::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::string fixed(double x, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}


RatingScale scale_of(const RunConfig& c) { return RatingScale{c.rating_min, c.rating_max}; }

std::optional<fs::path> optional_path(const std::string& p) {
  if (p.empty()) return std::nullopt;
  return fs::path(p);
}

Dataset load_dataset(const RunConfig& c, Io io) {
  Dataset data;
  data.ratings = load_ratings(c.ratings, scale_of(c));
  if (!c.trust.empty()) {
    data.trust = load_trust(c.trust, data.ratings.users());
    if (data.trust.duplicates_dropped() > 0) {
      io.err << "warning: dropped " << data.trust.duplicates_dropped() << " duplicate trust edge(s)\n";
    }
    if (data.trust.unknown_users_skipped() > 0) {
      io.err << "warning: skipped " << data.trust.unknown_users_skipped()
             << " trust edge(s) naming users without ratings\n";
    }
  } else {
    data.trust = TrustGraph(data.ratings.num_users(), {});
  }
  data.domains = load_domains(optional_path(c.domains), data.ratings);
  return data;
}

fs::path prepare_out_dir(const std::string& out) {
  if (out.empty()) throw ParameterError("--out is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

void effective_hyperparams(RunConfig& c) {
  if (c.pmf) c.experiment.h.lambda_t = 0.0;
  c.experiment.influence.alpha = c.experiment.h.alpha;
}

unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPMF_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

// ---- stats ---------------------------------------------------------------

int cmd_stats(const RunConfig& c, const std::string& out_file, Io io) {
  const auto store = load_ratings(c.ratings, scale_of(c));
  const auto graph = load_trust(c.trust, store.users());
  if (graph.unknown_users_skipped() > 0) {
    io.err << "warning: skipped " << graph.unknown_users_skipped()
           << " trust edge(s) naming users without ratings\n";
  }
  const auto s = stats(store, graph);
  const std::string json = to_json(s);
  io.out << json << "\n";
  io.err << "rating sparsity " << fixed(100.0 * s.rating_sparsity) << "%, trust sparsity "
         << fixed(100.0 * s.trust_sparsity) << "%\n";
  if (!out_file.empty()) write_file_atomic(out_file, json + "\n");
  return kOk;
}

// ---- similarity ----------------------------------------------------------

int cmd_similarity(const RunConfig& c, const std::string& user_a, const std::string& user_b, bool as_json, Io io) {
  const auto store = load_ratings(c.ratings, scale_of(c));
  const auto domains = load_domains(optional_path(c.domains), store);
  const auto a = store.users().find(user_a);
  const auto b = store.users().find(user_b);
  if (!a) throw DataError("unknown user '" + user_a + "'");
  if (!b) throw DataError("unknown user '" + user_b + "'");
  const auto ua = static_cast<UserIndex>(*a);
  const auto ub = static_cast<UserIndex>(*b);

  auto cell = [](const std::optional<double>& v) { return v ? fixed(*v) : std::string("--"); };
  auto json_cell = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };

  const auto whole = reference_similarities(store, ua, ub, std::nullopt, domains);
  ordered_json j;
  j["user_a"] = user_a;
  j["user_b"] = user_b;
  j["unsegmented"] = {{"cos", json_cell(whole.cosine)}, {"jaccard", json_cell(whole.jaccard)}, {"pcc", json_cell(whole.pcc)}};
  j["domains"] = ordered_json::array();

  std::ostringstream table;
  table << "scope\tcos\tjaccard\tpcc\n";
  table << "(unsegmented)\t" << cell(whole.cosine) << "\t" << cell(whole.jaccard) << "\t" << cell(whole.pcc) << "\n";
  for (DomainIndex d = 0; d < domains.num_domains(); ++d) {
    const auto seg = reference_similarities(store, ua, ub, d, domains);
    table << domains.name(d) << "\t" << cell(seg.cosine) << "\t" << cell(seg.jaccard) << "\t" << cell(seg.pcc) << "\n";
    j["domains"].push_back({{"domain", domains.name(d)},
                            {"cos", json_cell(seg.cosine)},
                            {"jaccard", json_cell(seg.jaccard)},
                            {"pcc", json_cell(seg.pcc)}});
  }
  if (as_json) {
    io.out << j.dump(2) << "\n";
  } else {
    io.out << table.str();
  }
  return kOk;
}

// ---- influence -----------------------------------------------------------

int cmd_influence(RunConfig c, Io io) {
  effective_hyperparams(c);
  const fs::path dir = prepare_out_dir(c.out);
  const Dataset data = load_dataset(c, io);
  const auto matrix = build_influence_matrix(data.ratings, data.trust, data.domains, c.experiment.influence);
  export_influence(matrix, data.ratings.users(), dir / "influence.tsv");
  write_file_atomic(dir / "config.ini", c.to_snapshot());

  io.out << "domain\tentries\n";
  constexpr int kBins = 20;  // width 0.1 over [-1, 1]
  std::vector<std::size_t> histogram(kBins, 0);
  for (DomainIndex d = 0; d < matrix.num_domains(); ++d) {
    io.out << matrix.domain_name(d) << "\t" << matrix.entries(d).size() << "\n";
    for (const auto& e : matrix.entries(d)) {
      const int bin = std::clamp(static_cast<int>(std::floor((e.weight + 1.0) * 10.0)), 0, kBins - 1);
      ++histogram[bin];
    }
  }
  io.out << "total\t" << matrix.total_entries() << "\n\nweight bin\tcount\n";
  for (int b = 0; b < kBins; ++b) {
    if (histogram[b] == 0) continue;
    io.out << "[" << fixed(-1.0 + 0.1 * b, 1) << ", " << fixed(-0.9 + 0.1 * b, 1) << ")\t" << histogram[b] << "\n";
  }
  return kOk;
}

// ---- train ---------------------------------------------------------------

int cmd_train(RunConfig c, Io io) {
  effective_hyperparams(c);
  const auto& h = c.experiment.h;
  h.validate();
  const fs::path dir = prepare_out_dir(c.out);
  const Dataset data = load_dataset(c, io);
  const Split parts = split(data.ratings, c.experiment.test_fraction, h.seed);

  const auto influence = (h.lambda_t != 0.0 && !c.pmf)
                             ? build_influence_matrix(parts.train, data.trust, data.domains, c.experiment.influence)
                             : InfluenceMatrix::empty(parts.train.num_users(), data.domains);

  if (c.experiment.mode == TrainingMode::merged) {
    const auto result = train(parts.train, influence, h);
    save_model(result.model, h, dir / "model.spmf");
    write_file_atomic(dir / "trace.csv", format_trace(result.trace));
    const auto& last = result.trace.back();
    io.out << "trained " << h.epochs << " epochs: objective " << last.objective << ", train RMSE "
           << fixed(last.train_rmse) << "\n";
  } else {
    for (const auto& dm : train_per_domain(parts.train, influence, data.domains, h)) {
      const std::string tag = std::to_string(dm.domain);
      save_model(dm.result.model, h, dir / ("model-" + tag + ".spmf"));
      write_file_atomic(dir / ("trace-" + tag + ".csv"), format_trace(dm.result.trace));
      io.out << "domain " << data.domains.name(dm.domain) << ": train RMSE "
             << fixed(dm.result.trace.back().train_rmse) << "\n";
    }
  }
  write_ratings(parts.train, dir / "train.tsv");
  write_ratings(parts.test, dir / "test.tsv");
  write_file_atomic(dir / "config.ini", c.to_snapshot());
  io.out << "influence entries: " << influence.total_entries() << "\n";
  io.out << "outputs written to " << dir.string() << "\n";
  return kOk;
}

// ---- eval ----------------------------------------------------------------

std::map<std::string, std::string> read_snapshot(const fs::path& path) {
  std::map<std::string, std::string> kv;
  for (const auto& arg : config_file_arguments(path.string())) {
    const auto eq = arg.find('=');
    kv[arg.substr(2, eq - 2)] = arg.substr(eq + 1);
  }
  return kv;
}

int cmd_eval(const std::vector<std::string>& model_paths, const std::string& test_path, bool no_clamp,
             const std::string& out_file, Io io) {
  std::vector<FactorModel> models;
  Hyperparams h;
  for (const auto& p : model_paths) {
    auto saved = load_model(p);
    h = saved.hyperparams;
    models.push_back(std::move(saved.model));
  }
  const auto& first = models.front();
  const auto test = load_ratings(test_path, *first.user_ids, *first.item_ids);
  if (test.empty()) throw DataError("empty test set");

  const bool clamp = !no_clamp && h.clamp_predictions;
  EvalReport report = evaluate(models, test, clamp);

  const fs::path model_dir = fs::path(model_paths.front()).parent_path();
  const fs::path snapshot = model_dir / "config.ini";
  if (fs::exists(snapshot)) {
    report.config = read_snapshot(snapshot);
    report.config.erase("no-clamp");
  } else {
    ExperimentConfig ec;
    ec.h = h;
    report.config = describe(ec);
  }
  report.config["clamp"] = clamp ? "true" : "false";
  // model.spmf pairs with trace.csv, model-<d>.spmf with trace-<d>.csv
  std::string stem = fs::path(model_paths.front()).stem().string();
  stem = stem.rfind("model", 0) == 0 ? "trace" + stem.substr(5) : "trace";
  const fs::path trace = model_dir / (stem + ".csv");
  if (fs::exists(trace)) report.epoch_trace_path = fs::absolute(trace).lexically_normal().string();

  const std::string json = to_json(report);
  io.out << json << "\n";
  if (!out_file.empty()) write_file_atomic(out_file, json + "\n");
  return kOk;
}

// ---- compare -------------------------------------------------------------

int cmd_compare(RunConfig c, Io io) {
  effective_hyperparams(c);
  const fs::path dir = prepare_out_dir(c.out);
  const Dataset data = load_dataset(c, io);
  c.experiment.with_baseline = true;
  const auto result = run_experiment(data, c.experiment);

  ordered_json j;
  j["spmf"] = ordered_json::parse(to_json(result.spmf));
  j["pmf"] = ordered_json::parse(to_json(*result.pmf));
  j["improvement_pct"] = {{"mae", improvement_pct(result.pmf->mae, result.spmf.mae)},
                          {"rmse", improvement_pct(result.pmf->rmse, result.spmf.rmse)}};
  write_file_atomic(dir / "report.json", j.dump(2) + "\n");
  write_file_atomic(dir / "trace.csv", format_trace(result.spmf_trace));
  write_file_atomic(dir / "config.ini", c.to_snapshot());
  io.out << format_comparison(result, c.experiment.h.k);
  return kOk;
}

// ---- sweep ---------------------------------------------------------------

int cmd_sweep(RunConfig c, const std::string& param, const std::vector<double>& values,
              const std::vector<std::uint64_t>& seeds, Io io) {
  effective_hyperparams(c);
  const fs::path dir = prepare_out_dir(c.out);
  const Dataset data = load_dataset(c, io);
  const auto result = sweep(data, c.experiment, parse_sweep_param(param), values, seeds, sweep_threads());
  const std::string csv = format_sweep_csv(result);
  write_file_atomic(dir / "sweep.csv", csv);
  auto join = [](const auto& xs) {
    std::string out;
    for (const auto& x : xs) {
      std::string item;
      if constexpr (std::is_integral_v<std::decay_t<decltype(x)>>) {
        item = std::to_string(x);
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        item = buf;
      }
      out += (out.empty() ? "" : ",") + item;
    }
    return out;
  };
  std::string snapshot = c.to_snapshot();
  snapshot += "param=" + param + "\n";
  snapshot += "values=" + join(values) + "\n";
  if (!seeds.empty()) snapshot += "seeds=" + join(seeds) + "\n";
  write_file_atomic(dir / "config.ini", snapshot);
  io.out << csv;
  for (const auto& cell : result.cells) {
    if (!cell.error.empty()) io.err << "cell " << param << "=" << cell.value << " seed " << cell.seed << " failed: " << cell.error << "\n";
  }
  return kOk;
}

// ---- synth ---------------------------------------------------------------

int cmd_synth(const PlantedConfig& config, std::uint64_t seed, const std::string& out, Io io) {
  const fs::path dir = prepare_out_dir(out);
  const Dataset data = generate_planted(config, seed);
  write_dataset(data, dir);
  io.out << "wrote " << data.ratings.size() << " ratings, " << data.trust.num_edges() << " trust edges over "
         << data.ratings.num_users() << " users and " << data.ratings.num_items() << " items to " << dir.string()
         << "\n";
  return kOk;
}

// Config-file values go first so explicit flags, parsed later, win. A flag
// given explicitly drops its config entry, so list options are replaced
// rather than extended.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  for (auto* s : app.get_subcommands({})) {
    if (s->get_name() == args.front()) sub = s;
  }
  if (!sub) return args;
  std::string config_path;
  std::vector<std::string> rest{args.front()};
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      config_path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      config_path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (config_path.empty()) return args;
  auto explicit_flag = [&](const std::string& name) {
    return std::any_of(rest.begin() + 1, rest.end(),
                       [&](const std::string& a) { return a == name || a.rfind(name + "=", 0) == 0; });
  };
  std::vector<std::string> expanded{args.front()};
  for (const auto& a : config_file_arguments(config_path)) {
    const auto name = a.substr(0, a.find('='));
    if (sub->get_option_no_throw(name) != nullptr && !explicit_flag(name)) expanded.push_back(a);
  }
  expanded.insert(expanded.end(), rest.begin() + 1, rest.end());
  return expanded;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Io io{out, err};
  CLI::App app{"Social trust and preference-domain matrix factorisation recommender", "spmf"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  RunConfig config;
  std::string out_file, user_a, user_b, test_path, param;
  std::vector<std::string> model_paths;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  bool as_json = false, no_clamp = false;
  PlantedConfig planted;
  std::uint64_t synth_seed = 1;

  auto add_config_flag = [](CLI::App* sub) {
    sub->add_option("--config", "key=value file of flag settings; explicit flags override it");
  };

  auto* stats_cmd = app.add_subcommand("stats", "Dataset size and sparsity as JSON");
  stats_cmd->add_option("--ratings", config.ratings, "Ratings file")->required();
  stats_cmd->add_option("--trust", config.trust, "Trust file")->required();
  stats_cmd->add_option("--rating-min", config.rating_min, "Lowest admissible rating");
  stats_cmd->add_option("--rating-max", config.rating_max, "Highest admissible rating");
  stats_cmd->add_option("--out", out_file, "Also write the JSON to this file");
  add_config_flag(stats_cmd);

  auto* sim_cmd = app.add_subcommand("similarity", "COS / Jaccard / PCC between two users, overall and per domain");
  sim_cmd->add_option("--ratings", config.ratings, "Ratings file")->required();
  sim_cmd->add_option("--domains", config.domains, "Domain file");
  sim_cmd->add_option("--rating-min", config.rating_min, "Lowest admissible rating");
  sim_cmd->add_option("--rating-max", config.rating_max, "Highest admissible rating");
  sim_cmd->add_option("--user-a", user_a, "First user id")->required();
  sim_cmd->add_option("--user-b", user_b, "Second user id")->required();
  sim_cmd->add_flag("--json", as_json, "Print JSON instead of a table");
  add_config_flag(sim_cmd);

  auto* inf_cmd = app.add_subcommand("influence", "Build and export the per-domain influence matrix");
  add_data_options(*inf_cmd, config, false);
  add_influence_options(*inf_cmd, config);
  inf_cmd->add_option("--out", config.out, "Output directory")->required();
  add_config_flag(inf_cmd);

  auto* train_cmd = app.add_subcommand("train", "Split, build influence, train, and save the model");
  add_data_options(*train_cmd, config, false);
  add_influence_options(*train_cmd, config);
  add_model_options(*train_cmd, config);
  train_cmd->add_option("--out", config.out, "Output directory")->required();
  add_config_flag(train_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Score saved model(s) on held-out ratings");
  eval_cmd->add_option("--model", model_paths, "Model file; repeat for per-domain models")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  eval_cmd->add_option("--test", test_path, "Held-out ratings file")->required();
  eval_cmd->add_flag("--no-clamp", no_clamp, "Do not clip predictions into the scale");
  eval_cmd->add_option("--out", out_file, "Also write the report to this file");
  add_config_flag(eval_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "Train SPMF and the PMF baseline on one split and compare");
  add_data_options(*compare_cmd, config, false);
  add_influence_options(*compare_cmd, config);
  add_model_options(*compare_cmd, config);
  compare_cmd->add_option("--out", config.out, "Output directory")->required();
  add_config_flag(compare_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Grid over one hyperparameter; writes sweep.csv");
  add_data_options(*sweep_cmd, config, false);
  add_influence_options(*sweep_cmd, config);
  add_model_options(*sweep_cmd, config);
  sweep_cmd->add_option("--param", param, "lambda_u_v, lambda_t, alpha or K")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated grid")->required()->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep_cmd->add_option("--seeds", seeds, "Comma-separated seeds (default: --seed)")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep_cmd->add_option("--out", config.out, "Output directory")->required();
  add_config_flag(sweep_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-community dataset");
  synth_cmd->add_option("--out", config.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->add_option("--users", planted.users, "Number of users");
  synth_cmd->add_option("--communities", planted.communities, "Number of communities");
  synth_cmd->add_option("--domains", planted.domains, "Number of domains");
  synth_cmd->add_option("--items-per-domain", planted.items_per_domain, "Items per domain");
  synth_cmd->add_option("--density", planted.rating_density, "Probability that a user rated an item");
  synth_cmd->add_option("--p-intra", planted.p_intra, "Trust probability inside a community");
  synth_cmd->add_option("--p-inter", planted.p_inter, "Trust probability across communities");
  synth_cmd->add_option("--noise", planted.noise_sigma, "Rating noise standard deviation");

  try {
    auto argv = expand_config(args, app);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);

    if (stats_cmd->parsed()) return cmd_stats(config, out_file, io);
    if (sim_cmd->parsed()) return cmd_similarity(config, user_a, user_b, as_json, io);
    if (inf_cmd->parsed()) return cmd_influence(config, io);
    if (train_cmd->parsed()) return cmd_train(config, io);
    if (eval_cmd->parsed()) return cmd_eval(model_paths, test_path, no_clamp, out_file, io);
    if (compare_cmd->parsed()) return cmd_compare(config, io);
    if (sweep_cmd->parsed()) return cmd_sweep(config, param, values, seeds, io);
    if (synth_cmd->parsed()) return cmd_synth(planted, synth_seed, config.out, io);
    return kUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidData;
  } catch (const UndefinedExperience& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidData;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace spmf::cli
