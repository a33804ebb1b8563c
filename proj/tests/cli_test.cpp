#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support/fixtures.hpp"

namespace spmf {
namespace {

using nlohmann::json;
using test::read_text;
using test::TempDir;
using test::write_text;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public testing::Test {
 protected:
  void SetUp() override { toy_ = test::write_toy(dir_.path()); }

  std::vector<std::string> data_flags() const {
    return {"--ratings", toy_.ratings.string(), "--trust", toy_.trust.string(), "--domains", toy_.domains.string()};
  }

  std::vector<std::string> with(std::string command, std::vector<std::string> extra) const {
    std::vector<std::string> args{std::move(command)};
    for (auto& a : data_flags()) args.push_back(a);
    for (auto& a : extra) args.push_back(a);
    return args;
  }

  TempDir dir_;
  test::ToyFiles toy_;
};

TEST_F(CliTest, StatsPrintsJson) {
  const auto r = run({"stats", "--ratings", toy_.ratings.string(), "--trust", toy_.trust.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["n"], 10);
  EXPECT_EQ(j["rating_count"], 15);
  EXPECT_EQ(j["trust_edge_count"], 1);
  EXPECT_DOUBLE_EQ(j["rating_sparsity"].get<double>(), 0.25);
}

TEST_F(CliTest, StatsMissingFileNamesPath) {
  const auto r = run({"stats", "--ratings", "/no/such/ratings.tsv", "--trust", toy_.trust.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/no/such/ratings.tsv"), std::string::npos);
}

TEST_F(CliTest, StatsEmptyTrustIsFullySparse) {
  write_text(dir_ / "none.tsv", "");
  const auto r = run({"stats", "--ratings", toy_.ratings.string(), "--trust", (dir_ / "none.tsv").string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["trust_sparsity"].get<double>(), 1.0);
}

TEST_F(CliTest, StatsBadDataExitsThree) {
  write_text(dir_ / "bad.tsv", "ua\tm1\t9\n");
  const auto r = run({"stats", "--ratings", (dir_ / "bad.tsv").string(), "--trust", toy_.trust.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
}

TEST_F(CliTest, SimilarityTable) {
  const auto r = run({"similarity", "--ratings", toy_.ratings.string(), "--domains", toy_.domains.string(),
                      "--user-a", "ua", "--user-b", "ub", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["unsegmented"]["cos"].get<double>(), 0.53, 0.005);
  ASSERT_EQ(j["domains"].size(), 3u);
  for (const auto& d : j["domains"]) {
    if (d["domain"] == "music") EXPECT_NEAR(d["pcc"].get<double>(), 0.97, 0.005);
    if (d["domain"] == "movies") EXPECT_TRUE(d["pcc"].is_null());
  }
  const auto table = run({"similarity", "--ratings", toy_.ratings.string(), "--domains", toy_.domains.string(),
                          "--user-a", "ua", "--user-b", "ub"});
  EXPECT_NE(table.out.find("movies\t--\t--\t--"), std::string::npos);
}

TEST_F(CliTest, SimilarityUnknownUser) {
  const auto r = run({"similarity", "--ratings", toy_.ratings.string(), "--user-a", "ua", "--user-b", "nobody"});
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, InfluenceOneMusicEntryPerDirection) {
  const auto out = dir_ / "inf";
  const auto r = run(with("influence", {"--out", out.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = read_text(out / "influence.tsv");
  EXPECT_NE(text.find("music\tub\tua\t"), std::string::npos);
  EXPECT_NE(text.find("music\tua\tub\t"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(r.out.find("music\t2"), std::string::npos);

  const auto again = dir_ / "inf2";
  ASSERT_EQ(run(with("influence", {"--out", again.string()})).code, 0);
  EXPECT_EQ(read_text(again / "influence.tsv"), text);
}

TEST_F(CliTest, InfluenceAlphaOneKeepsTrustedOnly) {
  write_text(dir_ / "no-trust.tsv", "");
  const auto out = dir_ / "inf";
  const auto r = run({"influence", "--ratings", toy_.ratings.string(), "--trust", (dir_ / "no-trust.tsv").string(),
                      "--domains", toy_.domains.string(), "--alpha", "1", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text(out / "influence.tsv"), "");
}

TEST_F(CliTest, TrainWritesModelTraceAndSnapshot) {
  const auto out = dir_ / "run";
  const auto r = run(with("train", {"--out", out.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"model.spmf", "trace.csv", "config.ini", "train.tsv", "test.tsv"}) {
    EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
  }
  const auto trace = read_text(out / "trace.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 11);
}

TEST_F(CliTest, ZeroSocialWeightTraceEqualsPmf) {
  const auto a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run(with("train", {"--lambda-t", "0", "--out", a.string()})).code, 0);
  ASSERT_EQ(run(with("train", {"--pmf", "--out", b.string()})).code, 0);
  EXPECT_EQ(read_text(a / "trace.csv"), read_text(b / "trace.csv"));
  EXPECT_EQ(read_text(a / "model.spmf"), read_text(b / "model.spmf"));
}

TEST_F(CliTest, LargeStepExitsWithDivergence) {
  const auto r = run(with("train", {"--gamma", "10", "--epochs", "50", "--out", (dir_ / "x").string()}));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("--gamma"), std::string::npos);
}

TEST_F(CliTest, EvalReport) {
  const auto out = dir_ / "run";
  ASSERT_EQ(run(with("train", {"--out", out.string()})).code, 0);
  const auto r = run({"eval", "--model", (out / "model.spmf").string(), "--test", (out / "test.tsv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["n_test"], 3);
  EXPECT_LE(j["mae"].get<double>(), j["rmse"].get<double>());
  EXPECT_EQ(j["config"]["k"], "20");
  EXPECT_NE(j["epoch_trace_path"].get<std::string>().find("trace.csv"), std::string::npos);
}

TEST_F(CliTest, EvalEmptyTestSetExitsThree) {
  const auto out = dir_ / "run";
  ASSERT_EQ(run(with("train", {"--out", out.string()})).code, 0);
  write_text(dir_ / "empty.tsv", "");
  const auto r = run({"eval", "--model", (out / "model.spmf").string(), "--test", (dir_ / "empty.tsv").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("empty test set"), std::string::npos);
}

TEST_F(CliTest, PerDomainModelsEvaluateAsEnsemble) {
  const auto out = dir_ / "pd";
  ASSERT_EQ(run(with("train", {"--mode", "per-domain", "--out", out.string()})).code, 0);
  std::vector<std::string> args{"eval", "--test", (out / "test.tsv").string()};
  for (const auto& entry : std::filesystem::directory_iterator(out)) {
    if (entry.path().extension() == ".spmf") {
      args.push_back("--model");
      args.push_back(entry.path().string());
    }
  }
  ASSERT_GT(args.size(), 3u);
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["config"]["mode"], "per-domain");
}

TEST_F(CliTest, ConfigSnapshotReproducesRun) {
  const auto a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run(with("train", {"--k", "3", "--epochs", "7", "--seed", "5", "--out", a.string()})).code, 0);
  const auto r = run({"train", "--config", (a / "config.ini").string(), "--out", b.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"model.spmf", "trace.csv", "config.ini", "train.tsv", "test.tsv"}) {
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
  }
}

TEST_F(CliTest, ExplicitFlagOverridesConfig) {
  const auto a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run(with("train", {"--epochs", "7", "--out", a.string()})).code, 0);
  ASSERT_EQ(run({"train", "--config", (a / "config.ini").string(), "--epochs", "3", "--out", b.string()}).code, 0);
  const auto trace = read_text(b / "trace.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 4);
}

TEST_F(CliTest, CompareWritesReport) {
  const auto out = dir_ / "cmp";
  const auto r = run(with("compare", {"--k", "3", "--out", out.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("K=3\tRMSE"), std::string::npos);
  const auto j = json::parse(read_text(out / "report.json"));
  EXPECT_TRUE(j.contains("spmf"));
  EXPECT_TRUE(j.contains("pmf"));
}

TEST_F(CliTest, SweepCsv) {
  const auto out = dir_ / "sw";
  const auto r = run(with("sweep", {"--param", "K", "--values", "2,3", "--seeds", "1,2", "--out", out.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_text(out / "sweep.csv");
  EXPECT_EQ(csv.rfind("param,value,K,seed,mae,rmse\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(CliTest, SweepSnapshotCarriesGrid) {
  const auto a = dir_ / "a", b = dir_ / "b", c = dir_ / "c";
  ASSERT_EQ(run(with("sweep", {"--param", "alpha", "--values", "0.2,0.7", "--seeds", "3", "--out", a.string()})).code,
            0);
  ASSERT_EQ(run({"sweep", "--config", (a / "config.ini").string(), "--out", b.string()}).code, 0);
  EXPECT_EQ(read_text(a / "sweep.csv"), read_text(b / "sweep.csv"));
  EXPECT_EQ(read_text(a / "config.ini"), read_text(b / "config.ini"));

  ASSERT_EQ(run({"sweep", "--config", (a / "config.ini").string(), "--values", "0.5", "--out", c.string()}).code, 0);
  const auto csv = read_text(c / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST_F(CliTest, SynthWritesLoadableDataset) {
  const auto out = dir_ / "syn";
  ASSERT_EQ(run({"synth", "--out", out.string(), "--users", "40", "--seed", "3"}).code, 0);
  const auto r = run({"stats", "--ratings", (out / "ratings.tsv").string(), "--trust", (out / "trust.tsv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["m"], 40);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"train", "--ratings", toy_.ratings.string()}).code, 2);  // --out missing
  EXPECT_EQ(run(with("train", {"--alpha", "3", "--out", (dir_ / "x").string()})).code, 2);
  EXPECT_EQ(run(with("train", {"--mode", "sideways", "--out", (dir_ / "x").string()})).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace spmf
