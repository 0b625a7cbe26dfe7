#include <sstream>

#include "doctest.h"
#include "fitpa/errors.hpp"
#include "fitpa/ingest.hpp"
#include "support.hpp"

using namespace fitpa;

namespace {

const std::string kFixtures = FITPA_FIXTURE_DIR;

std::vector<BiblioRecord> corpus() {
  return apply_aliases(parse_records(kFixtures + "/corpus.csv"), parse_alias_map(kFixtures + "/aliases.tsv"));
}

BiblioRecord record(std::string id, int year, std::vector<std::string> authors, std::vector<std::string> cited = {}) {
  BiblioRecord r;
  r.record_id = std::move(id);
  r.year = year;
  r.month = 1;
  r.authors = std::move(authors);
  r.cited_authors = std::move(cited);
  return r;
}

}  // namespace

TEST_CASE("fixture corpus yields the hand-counted networks") {
  const auto manifest = fitpa::testing::read_manifest(kFixtures + "/corpus_manifest.txt");
  const auto records = corpus();

  std::vector<std::string> warnings;
  BuildOptions bo;
  bo.warnings = &warnings;
  const auto co = build_coauthorship(records, Resolution::monthly, bo);
  CHECK(long(co.selectable_count()) == manifest.at("coauthorship.nodes"));
  CHECK(long(co.event_count()) == manifest.at("coauthorship.events"));
  CHECK(long(warnings.size()) == manifest.at("coauthorship.month_warnings"));
  CHECK(co.origin_year() == 1980);
  CHECK(co.node(*co.find("Hoskisson R")).birth_time == 12);
  const auto teece = *co.find("Teece D");
  CHECK(co.degree_at(teece, co.last_time() + 1) == 0);

  const auto cit = build_citation(records, Resolution::yearly);
  CHECK(long(cit.selectable_count()) == manifest.at("citation.nodes"));
  CHECK(long(cit.node_count() - cit.selectable_count()) == manifest.at("citation.sources"));
  CHECK(long(cit.event_count()) == manifest.at("citation.events"));
  CHECK_FALSE(cit.find("Porter M").has_value());
  CHECK(cit.node(*cit.find("Hitt M")).birth_time == 0);

  CitationOptions no_self;
  no_self.drop_self_citations = true;
  CHECK(long(build_citation(records, Resolution::yearly, no_self).event_count()) ==
        manifest.at("citation.events_without_self"));
  CitationOptions open;
  open.restrict_to_authors = false;
  const auto all = build_citation(records, Resolution::yearly, open);
  CHECK(long(all.selectable_count()) == manifest.at("citation.nodes_unrestricted"));
  CHECK(long(all.event_count()) == manifest.at("citation.events_unrestricted"));
}

TEST_CASE("a three-author record gives three co-authorship events") {
  const auto net = build_coauthorship(std::vector<BiblioRecord>{record("x", 2000, {"A", "B", "C"})});
  CHECK(net.event_count() == 3);
  CHECK(net.selectable_count() == 3);
}

TEST_CASE("a single-author record gives an isolated node") {
  const auto net = build_coauthorship(std::vector<BiblioRecord>{record("x", 2000, {"Solo"})});
  CHECK(net.selectable_count() == 1);
  CHECK(net.event_count() == 0);
}

TEST_CASE("aliases collapse repeated authors within a record") {
  AliasMap m;
  m.add("Hitt M", {"Hitt M.", "Hitt Michael"});
  const auto out = apply_aliases(std::vector<BiblioRecord>{record("x", 2000, {"Hitt M.", "Hitt Michael", "B"}, {"Hitt M.", "Hitt M"})}, m);
  CHECK(out[0].authors == std::vector<std::string>{"Hitt M", "B"});
  CHECK(out[0].cited_authors == std::vector<std::string>{"Hitt M", "Hitt M"});
}

TEST_CASE("alias map conflicts are rejected") {
  AliasMap m;
  m.add("A", {"a"});
  CHECK_THROWS_AS(m.add("B", {"a"}), std::invalid_argument);
  CHECK_THROWS_AS(m.add("C", {"A"}), std::invalid_argument);
  CHECK_THROWS_AS(m.add("a", {"x"}), std::invalid_argument);
  std::istringstream bad("A\ta\nB\ta\n");
  try {
    parse_alias_map(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream no_tab("A a\n");
  CHECK_THROWS_AS(parse_alias_map(no_tab), ParseError);
}

TEST_CASE("record parsing") {
  std::istringstream ok(
      "record_id,date,authors,cited_authors\n"
      "p1,1999-12,\" Doe J ; Roe K \",\"Smith, A\"\n"
      "\n"
      "p2,2001,Doe J,\n");
  const auto rs = parse_records(ok);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].month == 12);
  CHECK(rs[0].authors == std::vector<std::string>{"Doe J", "Roe K"});
  CHECK(rs[0].cited_authors == std::vector<std::string>{"Smith, A"});
  CHECK_FALSE(rs[1].month.has_value());
  CHECK(rs[1].cited_authors.empty());

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_records(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string header = "record_id,date,authors,cited_authors\n";
  CHECK(line_of(header + "p,1999-13,A,\n") == 2);
  CHECK(line_of(header + "p,99,A,\n") == 2);
  CHECK(line_of(header + "p,1999,,\n") == 2);
  CHECK(line_of(header + "p,1999,A\n") == 2);
  CHECK(line_of(header + "p,1999,\"A,\n") == 2);
  CHECK(line_of("id,when,who\n") == 1);
}

TEST_CASE("time indices") {
  auto r = record("x", 1983, {"A"});
  r.month = 4;
  CHECK(time_index(r, Resolution::monthly, 1980) == 39);
  CHECK(time_index(r, Resolution::yearly, 1980) == 3);
  CHECK_THROWS(time_index(r, Resolution::step, 1980));
  BuildOptions bo;
  bo.origin_year = 1990;
  CHECK_THROWS(build_coauthorship(std::vector<BiblioRecord>{r}, Resolution::monthly, bo));
}

TEST_CASE("records sharing a time step are ordered by id") {
  const auto net = build_coauthorship(
      std::vector<BiblioRecord>{record("b", 2000, {"X", "Y"}), record("a", 2000, {"Y", "Z"})});
  CHECK(net.node(0).label == "Y");
  CHECK(net.node(1).label == "Z");
}
