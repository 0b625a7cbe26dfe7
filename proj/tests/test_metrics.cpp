#include <sstream>

#include "doctest.h"
#include "fitpa/errors.hpp"
#include "fitpa/metrics.hpp"
#include "support.hpp"

using namespace fitpa;

namespace {

/// Published 1980-1989 co-authorship column, listed out of order.
EstimationResult table_one() {
  const std::vector<std::pair<std::string, double>> rows{
      {"Kim W", 3.610},       {"Thomas H", 4.736},  {"Pearce J", 3.096}, {"Bettis R", 4.116},
      {"Wernerfelt B", 4.718}, {"Robinson R", 3.578}, {"Hitt M", 3.599},  {"Macmillan I", 3.146},
      {"Montgomery C", 3.951}, {"Bracker J", 3.496},  {"Someone X", 0.2},
  };
  EstimationResult r;
  NodeId id = 0;
  for (const auto& [name, value] : rows) r.eta.push_back({id++, name, value, true});
  r.eta.push_back({id++, "Unexposed Y", 9.0, false});
  r.build_index();
  return r;
}

}  // namespace

TEST_CASE("series match brute-force sums on small fixtures") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto net = fitpa::testing::random_fixture(700 + seed, seed % 2 == 0);
    const auto r = estimate(net, EstimationConfig{});
    const auto raw = build_series(net, r, net.first_time(), net.last_time(), false);
    REQUIRE(raw.size() > 0);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      const auto bf = fitpa::testing::brute_metrics(net, r, raw.times[k]);
      CHECK(raw.N[k] == bf.N);
      CHECK(std::abs(raw.S[k] - bf.S) <= 1e-12);
      CHECK(std::abs(raw.S_bar[k] - bf.S / double(bf.N)) <= 1e-12);
      CHECK(std::abs(raw.C[k] - bf.C) <= 1e-12);
      CHECK(std::abs(raw.S[k] - raw.S_bar[k] * double(raw.N[k])) <= 1e-12);
    }
    const auto anchored = build_series(net, r, net.first_time(), net.last_time(), true);
    CHECK(anchored.S.front() == 1.0);
    CHECK(anchored.S_bar.front() == 1.0);
    CHECK(anchored.C.front() == 1.0);
    for (std::size_t k = 0; k < anchored.size(); ++k) {
      CHECK(anchored.S[k] == doctest::Approx(raw.S[k] / raw.S[0]).epsilon(1e-14));
    }
  }
}

TEST_CASE("series start at the first time with an active node") {
  TemporalNetwork net(Resolution::step, true);
  const auto a = net.add_node("a", 3), b = net.add_node("b", 3);
  const auto c = net.add_node("c", 4);
  net.add_event(4, c, a);
  net.add_event(5, c, b);
  (void)b;
  const auto r = estimate(net, EstimationConfig{});
  const auto s = build_series(net, r, 0, 6, true);
  CHECK(s.times.front() == 3);
  CHECK(s.times.back() == 6);
  CHECK(s.N == std::vector<std::size_t>{2, 3, 3, 3});
  CHECK_THROWS_AS(build_series(net, r, 0, 2, true), std::domain_error);
}

TEST_CASE("average competitiveness needs nodes") {
  CHECK(average_competitiveness(6.0, 3) == 2.0);
  CHECK_THROWS_AS(average_competitiveness(1.0, 0), std::domain_error);
}

TEST_CASE("metrics reject results that do not cover an active node") {
  const auto net = fitpa::testing::random_fixture(3, true);
  auto r = estimate(net, EstimationConfig{});
  r.eta.pop_back();
  r.build_index();
  CHECK_THROWS_AS(total_competitiveness(net, r, net.last_time()), CoverageError);
}

TEST_CASE("ranking reproduces the published order") {
  const auto ranked = rank_by_fitness(table_one(), 10);
  const std::vector<std::string> expected{"Thomas H", "Wernerfelt B", "Bettis R",   "Montgomery C", "Kim W",
                                          "Hitt M",   "Robinson R",   "Bracker J",  "Macmillan I",  "Pearce J"};
  REQUIRE(ranked.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(ranked[i].label == expected[i]);

  std::ostringstream csv;
  write_ranking_csv(csv, ranked);
  const auto text = csv.str();
  CHECK(text.rfind("rank,author,fitness\n1,Thomas H,4.736\n2,Wernerfelt B,4.718\n", 0) == 0);
  CHECK_THROWS_AS(rank_by_fitness(table_one(), 0), std::invalid_argument);
  CHECK(rank_by_fitness(table_one(), 100).size() == 11);  // the unexposed node never ranks
}

TEST_CASE("ties in fitness rank by label") {
  EstimationResult r;
  r.eta = {{0, "b", 2.0, true}, {1, "a", 2.0, true}, {2, "c", 3.0, true}};
  const auto ranked = rank_by_fitness(r, 3);
  CHECK(ranked[0].label == "c");
  CHECK(ranked[1].label == "a");
  CHECK(ranked[2].label == "b");
}

TEST_CASE("ranking CSV quotes awkward names") {
  std::ostringstream csv;
  write_ranking_csv(csv, {{"Smith, J \"Jr\"", 1.0}});
  CHECK(csv.str() == "rank,author,fitness\n1,\"Smith, J \"\"Jr\"\"\",1.000\n");
}

TEST_CASE("fitness histogram counts exposed nodes") {
  const auto h = fitness_histogram(table_one(), 1.0);
  std::size_t total = 0;
  for (const auto& bin : h) total += bin.count;
  CHECK(total == 11);
  CHECK(h.front().lo == 0.0);
  CHECK(h.back().hi == 5.0);
  CHECK(h[3].count == 7);  // 3.096 .. 3.951
}

TEST_CASE("series CSV") {
  CompetitivenessSeries s;
  s.times = {0, 1};
  s.N = {2, 4};
  s.S = {1.0, 2.5};
  s.S_bar = {1.0, 0.625};
  s.C = {1.0, 1.1};
  std::ostringstream csv;
  write_series_csv(csv, s);
  CHECK(csv.str() == "t,N,S,S_bar,C\n0,2,1,1,1\n1,4,2.5,0.625,1.1\n");
}
