#include <sstream>

#include "doctest.h"
#include "fitpa/binning.hpp"
#include "fitpa/errors.hpp"
#include "fitpa/temporal_net.hpp"
#include "support.hpp"

using namespace fitpa;

TEST_CASE("re-adding a label keeps one node with the earlier birth") {
  TemporalNetwork net;
  const auto a = net.add_node("a", 5);
  CHECK(net.add_node("a", 2) == a);
  CHECK(net.add_node("a", 9) == a);
  CHECK(net.node(a).birth_time == 2);
  CHECK(net.node_count() == 1);
  CHECK(net.find("a") == a);
  CHECK_FALSE(net.find("b").has_value());
}

TEST_CASE("source nodes emit edges but never compete") {
  TemporalNetwork net(Resolution::yearly, true);
  const auto s = net.add_source_node("record:1", 0);
  const auto t = net.add_node("x", 0);
  net.add_event(0, s, t);
  CHECK(net.selectable_count() == 1);
  CHECK(net.active_nodes(0) == std::vector<NodeId>{t});
  CHECK_FALSE(net.find("record:1").has_value());
}

TEST_CASE("event contract violations") {
  TemporalNetwork net(Resolution::step, false);
  const auto a = net.add_node("a", 0);
  const auto b = net.add_node("b", 3);
  CHECK_THROWS_AS(net.add_event(1, a, 7), NetworkError);
  CHECK_THROWS_AS(net.add_event(1, a, a), NetworkError);
  CHECK_THROWS_AS(net.add_event(1, a, b), NetworkError);  // b not born yet
  net.add_event(4, a, b);
  CHECK_THROWS_AS(net.add_event(3, a, b), NetworkError);  // time regression
  CHECK_THROWS_AS(net.add_event({5, a, b, true}), NetworkError);
}

TEST_CASE("degrees count increments strictly before t") {
  TemporalNetwork und(Resolution::step, false);
  const auto a = und.add_node("a", 0), b = und.add_node("b", 0), c = und.add_node("c", 0);
  und.add_event(1, a, b);
  und.add_event(1, a, c);
  und.add_event(2, b, c);
  CHECK(und.degree_at(a, 1) == 0);
  CHECK(und.degree_at(a, 2) == 2);
  CHECK(und.degree_at(b, 2) == 1);
  CHECK(und.degree_at(b, 3) == 2);
  CHECK(und.max_degree() == 2);

  TemporalNetwork dir(Resolution::step, true);
  const auto x = dir.add_node("x", 0), y = dir.add_node("y", 0);
  dir.add_event(0, x, y);
  dir.add_event(1, x, y);
  CHECK(dir.degree_at(x, 5) == 0);
  CHECK(dir.degree_at(y, 1) == 1);
  CHECK(dir.degree_at(y, 2) == 2);
}

TEST_CASE("active sets include nodes born at t") {
  TemporalNetwork net;
  net.add_node("a", 0);
  net.add_node("b", 2);
  CHECK(net.active_count(1) == 1);
  CHECK(net.active_count(2) == 2);
}

TEST_CASE("degree table agrees with degree_at") {
  const auto net = fitpa::testing::random_fixture(9, false);
  const auto table = net.degree_table(0, 6);
  for (Time t = 0; t <= 6; ++t) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(net.max_degree()) + 1, 0);
    for (auto id : net.active_nodes(t)) ++counts[static_cast<std::size_t>(net.degree_at(id, t))];
    for (std::size_t k = 0; k < counts.size(); ++k) CHECK(table.at(t, k) == counts[k]);
  }
}

TEST_CASE("slices keep ids, carry degrees and restrict the population") {
  TemporalNetwork net(Resolution::step, true);
  const auto a = net.add_node("a", 0), b = net.add_node("b", 0);
  net.add_event(1, b, a);
  net.add_event(2, b, a);
  const auto c = net.add_node("c", 3);
  net.add_event(3, c, a);
  net.add_node("d", 6);

  const auto carried = net.slice_period(2, 4, true);
  CHECK(carried.event_count() == 2);
  CHECK(carried.degree_at(a, 2) == 1);
  CHECK(carried.degree_at(a, 4) == 3);
  CHECK(carried.window()->start == 2);
  CHECK(carried.population() == std::vector<NodeId>{a, b, c});

  const auto reset = net.slice_period(2, 4, false);
  CHECK(reset.degree_at(a, 2) == 0);
  CHECK(reset.degree_at(a, 4) == 2);
  CHECK_FALSE(net.window().has_value());
}

TEST_CASE("network file round trip") {
  TemporalNetwork net(Resolution::monthly, true);
  net.set_origin_year(1980);
  const auto s = net.add_source_node("record:r1", 0);
  const auto a = net.add_node("Hitt M", 0);
  const auto b = net.add_node("name with spaces", 1);
  net.add_event(0, s, a);
  net.add_event(1, s, b);
  std::stringstream io;
  write_network(io, net, {"lambda=1"});
  const auto back = read_network(io);
  CHECK(back.resolution() == Resolution::monthly);
  CHECK(back.directed());
  CHECK(back.origin_year() == 1980);
  CHECK(back.node_count() == 3);
  CHECK_FALSE(back.node(s).selectable);
  CHECK(back.node(b).label == "name with spaces");
  CHECK(back.event_count() == 2);
  CHECK(back.events()[1].target == b);

  const auto slice = net.slice_period(1, 1, true);
  std::stringstream io2;
  write_network(io2, slice);
  CHECK(read_network(io2).degree_at(a, 1) == 1);
}

TEST_CASE("network file errors name the line") {
  std::stringstream bad("#resolution=step\tdirected=0\nN\t0\t0\ta\nE\t0\t0\t5\n");
  try {
    read_network(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::stringstream no_header("N\t0\t0\ta\n");
  CHECK_THROWS_AS(read_network(no_header), ParseError);
  std::stringstream gap("#resolution=step\tdirected=0\nN\t1\t0\ta\n");
  CHECK_THROWS_AS(read_network(gap), ParseError);
}

TEST_CASE("default binning: one bin per degree up to 50, then geometric") {
  const DegreeBinning bins(BinningScheme{}, 400);
  for (std::int64_t k = 0; k <= 50; ++k) {
    CHECK(bins.lo(static_cast<std::size_t>(k)) == k);
    CHECK(bins.hi(static_cast<std::size_t>(k)) == k);
  }
  for (std::size_t b = 52; b < bins.size(); ++b) {
    CHECK(bins.lo(b) == bins.hi(b - 1) + 1);
    CHECK(bins.lo(b) >= static_cast<std::int64_t>(std::ceil(1.25 * static_cast<double>(bins.lo(b - 1)) - 1e-9)));
  }
  CHECK(bins.hi(bins.size() - 1) == 400);
  for (std::int64_t k = 0; k <= 400; ++k) {
    const auto b = bins.bin_of(k);
    CHECK(bins.lo(b) <= k);
    CHECK(k <= bins.hi(b));
  }
  CHECK(bins.bin_of(10000) == bins.size() - 1);
  CHECK(bins.representative(0) == 0.0);
  CHECK(bins.representative(4) == 4.0);
  CHECK(bins.representative(bins.size() - 1) ==
        doctest::Approx(std::sqrt(double(bins.lo(bins.size() - 1)) * 400.0)));
}

TEST_CASE("explicit bin edges") {
  const DegreeBinning bins(std::vector<std::int64_t>{0, 1, 3, 10}, 20);
  CHECK(bins.size() == 4);
  CHECK(bins.bin_of(2) == 1);
  CHECK(bins.bin_of(9) == 2);
  CHECK(bins.hi(3) == 20);
  CHECK_THROWS(DegreeBinning(std::vector<std::int64_t>{0, 2, 5}, 10));
  CHECK_THROWS(DegreeBinning(std::vector<std::int64_t>{0, 3, 2}, 10));
}

TEST_CASE("resolution names") {
  CHECK(parse_resolution("monthly") == Resolution::monthly);
  CHECK(to_string(Resolution::yearly) == "yearly");
  CHECK_THROWS(parse_resolution("weekly"));
}
