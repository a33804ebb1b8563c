#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "spmf/dataset_stats.hpp"
#include "spmf/domain_map.hpp"
#include "spmf/errors.hpp"
#include "spmf/rating_store.hpp"
#include "spmf/trust_graph.hpp"
#include "support/fixtures.hpp"

namespace spmf {
namespace {

using test::TempDir;
using test::write_text;

TEST(LoadRatings, CountsUsersItemsAndRatings) {
  TempDir dir;
  write_text(dir / "r.tsv",
             "a\tx\t1\na\ty\t2\na\tz\t3\na\tw\t4\n"
             "b\tx\t5\nb\ty\t1\nb\tz\t2\n"
             "c\tx\t3\nc\ty\t4\nc\tw\t5\n");
  const auto store = load_ratings(dir / "r.tsv");
  EXPECT_EQ(store.num_users(), 3u);
  EXPECT_EQ(store.num_items(), 4u);
  EXPECT_EQ(store.size(), 10u);
}

TEST(LoadRatings, EmptyFileGivesEmptyStore) {
  TempDir dir;
  write_text(dir / "r.tsv", "");
  const auto store = load_ratings(dir / "r.tsv");
  EXPECT_EQ(store.num_users(), 0u);
  EXPECT_EQ(store.num_items(), 0u);
  EXPECT_TRUE(store.empty());
}

TEST(LoadRatings, TableOneToy) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  const auto store = load_ratings(files.ratings);
  EXPECT_EQ(store.num_users(), 2u);
  EXPECT_EQ(store.num_items(), 10u);
  // Nonzero cells of the two rows: 6 + 9.
  EXPECT_EQ(store.size(), 15u);
}

TEST(LoadRatings, SkipsCommentsBlankLinesAndCarriageReturns) {
  TempDir dir;
  write_text(dir / "r.tsv", "# header\n\na\tx\t4\r\n  \nb\tx\t2.5\n");
  const auto store = load_ratings(dir / "r.tsv");
  EXPECT_EQ(store.size(), 2u);
  EXPECT_DOUBLE_EQ(*store.find(1, 0), 2.5);
}

TEST(LoadRatings, MalformedLineReportsLineNumber) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t4\na\ty\n");
  try {
    load_ratings(dir / "r.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  write_text(dir / "r.tsv", "a\tx\t4\n\na\ty\tfour\n");
  try {
    load_ratings(dir / "r.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadRatings, RejectsOutOfScaleIncludingZero) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t0\n");
  EXPECT_THROW(load_ratings(dir / "r.tsv"), DataError);
  write_text(dir / "r.tsv", "a\tx\t5.5\n");
  EXPECT_THROW(load_ratings(dir / "r.tsv"), DataError);
  write_text(dir / "r.tsv", "a\tx\t7\n");
  EXPECT_NO_THROW(load_ratings(dir / "r.tsv", RatingScale{1, 10}));
}

TEST(LoadRatings, DuplicatePairNamesSecondLine) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t4\nb\tx\t3\na\tx\t2\n");
  try {
    load_ratings(dir / "r.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadRatings, MissingFileIsIoError) {
  EXPECT_THROW(load_ratings("/nonexistent/ratings.tsv"), IoError);
}

TEST(LoadRatings, CsrAndCscViewsAgree) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = test::random_instance(rng, {});
    const auto store = x.store();
    std::size_t by_user = 0, by_item = 0;
    for (UserIndex u = 0; u < store.num_users(); ++u) {
      for (const auto& e : store.user_ratings(u)) {
        EXPECT_EQ(x.r[u][e.index], e.value);
        ++by_user;
      }
    }
    for (ItemIndex i = 0; i < store.num_items(); ++i) {
      for (const auto& e : store.item_ratings(i)) {
        EXPECT_EQ(x.r[e.index][i], e.value);
        ++by_item;
      }
    }
    EXPECT_EQ(by_user, store.size());
    EXPECT_EQ(by_item, store.size());
  }
}

TEST(WriteRatings, RoundTrips) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t4\nb\ty\t2.125\na\ty\t3.3\n");
  const auto store = load_ratings(dir / "r.tsv");
  write_ratings(store, dir / "out.tsv");
  const auto again = load_ratings(dir / "out.tsv");
  ASSERT_EQ(again.size(), store.size());
  for (std::size_t k = 0; k < store.size(); ++k) {
    const auto& a = store.ratings()[k];
    const auto& b = again.ratings()[k];
    EXPECT_EQ(store.users().name(a.user), again.users().name(b.user));
    EXPECT_EQ(store.items().name(a.item), again.items().name(b.item));
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(LoadTrust, Degrees) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t1\nb\tx\t1\nc\tx\t1\n");
  write_text(dir / "t.tsv", "a\tb\nb\tc\n");
  const auto store = load_ratings(dir / "r.tsv");
  const auto graph = load_trust(dir / "t.tsv", store.users());
  EXPECT_EQ(graph.out_degree(0), 1u);
  EXPECT_EQ(graph.in_degree(2), 1u);
  EXPECT_EQ(graph.num_edges(), 2u);
  EXPECT_TRUE(graph.has_edge(0, 1));
  EXPECT_FALSE(graph.has_edge(1, 0));
  EXPECT_TRUE(graph.linked(1, 0));
  EXPECT_FALSE(graph.linked(0, 2));
}

TEST(LoadTrust, EmptyFileHasNoLinks) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t1\nb\tx\t1\n");
  write_text(dir / "t.tsv", "");
  const auto store = load_ratings(dir / "r.tsv");
  const auto graph = load_trust(dir / "t.tsv", store.users());
  EXPECT_EQ(graph.num_edges(), 0u);
  for (UserIndex u = 0; u < 2; ++u) {
    EXPECT_TRUE(graph.trustees(u).empty());
    EXPECT_TRUE(graph.trusters(u).empty());
  }
}

TEST(LoadTrust, SelfLoopIsError) {
  TempDir dir;
  write_text(dir / "r.tsv", "u\tx\t1\n");
  write_text(dir / "t.tsv", "u\tu\n");
  const auto store = load_ratings(dir / "r.tsv");
  try {
    load_trust(dir / "t.tsv", store.users());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(LoadTrust, DuplicatesCollapsedUnknownUsersSkipped) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t1\nb\tx\t1\n");
  write_text(dir / "t.tsv", "a\tb\na\tb\na\tghost\n");
  const auto store = load_ratings(dir / "r.tsv");
  const auto graph = load_trust(dir / "t.tsv", store.users());
  EXPECT_EQ(graph.num_edges(), 1u);
  EXPECT_EQ(graph.duplicates_dropped(), 1u);
  EXPECT_EQ(graph.unknown_users_skipped(), 1u);
}

TEST(LoadTrust, MalformedLine) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t1\n");
  write_text(dir / "t.tsv", "a\n");
  const auto store = load_ratings(dir / "r.tsv");
  EXPECT_THROW(load_trust(dir / "t.tsv", store.users()), DataError);
}

TEST(LoadDomains, TableOneHasThreeDomains) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  const auto store = load_ratings(files.ratings);
  const auto domains = load_domains(files.domains, store);
  ASSERT_EQ(domains.num_domains(), 3u);
  EXPECT_EQ(domains.items_in(*domains.find("music")).size(), 4u);
  EXPECT_EQ(domains.items_in(*domains.find("movies")).size(), 3u);
  EXPECT_EQ(domains.items_in(*domains.find("books")).size(), 3u);
}

TEST(LoadDomains, AbsentPathIsOneDomain) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  const auto store = load_ratings(files.ratings);
  const auto domains = load_domains(std::nullopt, store);
  ASSERT_EQ(domains.num_domains(), 1u);
  EXPECT_EQ(domains.items_in(0).size(), 10u);
}

TEST(LoadDomains, PartialFileFillsDefault) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  write_text(dir / "d.tsv", "m1\tmusic\nm2\tmusic\nm3\tmusic\nm4\tmusic\nv1\tmovies\n");
  const auto store = load_ratings(files.ratings);
  const auto domains = load_domains(dir / "d.tsv", store);
  ASSERT_EQ(domains.num_domains(), 3u);
  const auto fallback = domains.find(DomainMap::kDefaultDomain);
  ASSERT_TRUE(fallback);
  EXPECT_EQ(domains.items_in(*fallback).size(), 5u);
  EXPECT_EQ(domains.items_in(*domains.find("music")).size() + domains.items_in(*domains.find("movies")).size(), 5u);
}

TEST(LoadDomains, ItemInTwoDomainsIsError) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  write_text(dir / "d.tsv", "m1\tmusic\nm1\tbooks\n");
  const auto store = load_ratings(files.ratings);
  EXPECT_THROW(load_domains(dir / "d.tsv", store), DataError);
  write_text(dir / "d.tsv", "m1\tmusic\nm1\tmusic\n");
  EXPECT_NO_THROW(load_domains(dir / "d.tsv", store));
}

TEST(LoadDomains, UnratedItemsKeptAside) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  write_text(dir / "d.tsv", "m1\tmusic\nzz\tjazz\n");
  const auto store = load_ratings(files.ratings);
  const auto domains = load_domains(dir / "d.tsv", store);
  EXPECT_EQ(domains.unrated_items().count("zz"), 1u);
  EXPECT_FALSE(domains.find("jazz"));
}

std::multiset<std::tuple<std::string, std::string, double>> triples(const RatingStore& s) {
  std::multiset<std::tuple<std::string, std::string, double>> out;
  for (const auto& r : s.ratings()) out.emplace(s.users().name(r.user), s.items().name(r.item), r.value);
  return out;
}

TEST(Split, EightyTwentyDeterministicPartition) {
  std::mt19937_64 rng(11);
  test::Instance x;
  x.m = 10;
  x.n = 10;
  x.domain.assign(10, 0);
  x.r.assign(10, std::vector<double>(10, 0));
  for (auto& row : x.r) {
    for (auto& v : row) v = double(1 + rng() % 5);
  }
  const auto store = x.store();
  ASSERT_EQ(store.size(), 100u);
  const auto a = split(store, 0.2, 7);
  const auto b = split(store, 0.2, 7);
  EXPECT_EQ(a.train.size(), 80u);
  EXPECT_EQ(a.test.size(), 20u);
  EXPECT_EQ(triples(a.test), triples(b.test));

  auto all = triples(a.train);
  for (const auto& t : triples(a.test)) {
    EXPECT_EQ(all.count(t), 0u);
    all.insert(t);
  }
  EXPECT_EQ(all, triples(store));

  const auto c = split(store, 0.2, 8);
  EXPECT_NE(triples(a.test), triples(c.test));
}

TEST(Split, SingleRatingGoesToTrain) {
  TempDir dir;
  write_text(dir / "r.tsv", "a\tx\t3\n");
  const auto parts = split(load_ratings(dir / "r.tsv"), 0.2, 1);
  EXPECT_EQ(parts.train.size(), 1u);
  EXPECT_TRUE(parts.test.empty());
}

TEST(Split, SharesIdMaps) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  const auto store = load_ratings(files.ratings);
  const auto parts = split(store, 0.3, 3);
  EXPECT_EQ(parts.train.shared_users(), store.shared_users());
  EXPECT_EQ(parts.test.shared_items(), store.shared_items());
}

TEST(Split, FractionOutsideOpenIntervalRejected) {
  TempDir dir;
  const auto files = test::write_toy(dir.path());
  const auto store = load_ratings(files.ratings);
  EXPECT_THROW(split(store, 0.0, 1), ParameterError);
  EXPECT_THROW(split(store, 1.0, 1), ParameterError);
  EXPECT_THROW(split(store, -0.5, 1), ParameterError);
}

TEST(Stats, CiaoCounts) {
  const auto s = compute_stats(7375, 99746, 280391, 111781);
  EXPECT_NEAR(100 * s.rating_sparsity, 99.9619, 5e-5);
  EXPECT_NEAR(100 * s.trust_sparsity, 99.7945, 5e-5);
}

TEST(Stats, EpinionsCounts) {
  const auto s = compute_stats(40163, 139738, 664824, 487183);
  EXPECT_NEAR(100 * s.rating_sparsity, 99.9882, 5e-5);
  EXPECT_NEAR(100 * s.trust_sparsity, 99.9698, 5e-5);
}

TEST(Stats, ToySizedArithmetic) {
  const auto s = compute_stats(2, 10, 17, 0);
  EXPECT_NEAR(s.rating_sparsity, 0.15, 1e-15);
  EXPECT_EQ(s.trust_sparsity, 1.0);
}

TEST(Stats, EmptyMatrixIsFullySparse) {
  const auto s = compute_stats(0, 0, 0, 0);
  EXPECT_EQ(s.rating_sparsity, 1.0);
  EXPECT_EQ(s.trust_sparsity, 1.0);
}

}  // namespace
}  // namespace spmf
