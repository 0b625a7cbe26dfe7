#include "fitpa/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_set>

#include "fitpa/errors.hpp"

namespace fitpa {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits one CSV line, honouring double quotes and "" escapes.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote", line_no);
  return fields;
}

std::vector<std::string> split_names(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto semi = s.find(';', pos);
    const auto piece = trim(s.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos));
    if (!piece.empty()) out.push_back(piece);
    if (semi == std::string_view::npos) break;
    pos = semi + 1;
  }
  return out;
}

bool parse_digits(std::string_view s, std::size_t width, int& out) {
  if (s.size() != width) return false;
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return true;
}

void parse_date(const std::string& raw, BiblioRecord& rec, std::size_t line_no) {
  const std::string date = trim(raw);
  const std::string_view v(date);
  int year = 0;
  if (v.size() == 4 && parse_digits(v, 4, year)) {
    rec.year = year;
    rec.month.reset();
    return;
  }
  int month = 0;
  if (v.size() == 7 && v[4] == '-' && parse_digits(v.substr(0, 4), 4, year) && parse_digits(v.substr(5), 2, month) &&
      month >= 1 && month <= 12) {
    rec.year = year;
    rec.month = month;
    return;
  }
  throw ParseError("malformed date '" + date + "' (expected YYYY or YYYY-MM)", line_no);
}

struct Keyed {
  Time time;
  const BiblioRecord* record;
};

std::vector<Keyed> sorted_by_time(std::span<const BiblioRecord> records, Resolution resolution,
                                  const BuildOptions& options, int& origin) {
  origin = options.origin_year.value_or(0);
  if (!options.origin_year && !records.empty()) {
    origin = std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
               return a.year < b.year;
             })->year;
  }
  std::vector<Keyed> keyed;
  keyed.reserve(records.size());
  for (const auto& r : records) {
    if (r.year < origin) throw std::invalid_argument("record " + r.record_id + " predates the origin year");
    if (resolution == Resolution::monthly && !r.month && options.warnings) {
      options.warnings->push_back("record " + r.record_id + " has no month; assuming January");
    }
    keyed.push_back({time_index(r, resolution, origin), &r});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.record->record_id < b.record->record_id;
  });
  return keyed;
}

}  // namespace

std::vector<BiblioRecord> parse_records(std::istream& in) {
  std::vector<BiblioRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (trim(line) != "record_id,date,authors,cited_authors") {
        throw ParseError("expected header 'record_id,date,authors,cited_authors'", line_no);
      }
      continue;
    }
    const auto f = split_csv(line, line_no);
    if (f.size() != 4) throw ParseError("expected 4 columns, found " + std::to_string(f.size()), line_no);
    BiblioRecord rec;
    rec.record_id = trim(f[0]);
    if (rec.record_id.empty()) throw ParseError("empty record_id", line_no);
    parse_date(f[1], rec, line_no);
    rec.authors = split_names(f[2]);
    if (rec.authors.empty()) throw ParseError("record " + rec.record_id + " has no authors", line_no);
    rec.cited_authors = split_names(f[3]);
    out.push_back(std::move(rec));
  }
  if (!header_seen) throw ParseError("empty record file", 0);
  return out;
}

std::vector<BiblioRecord> parse_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open record file " + path);
  return parse_records(in);
}

void AliasMap::add(const std::string& canonical, const std::vector<std::string>& aliases) {
  if (alias_to_canonical_.count(canonical)) {
    throw std::invalid_argument("'" + canonical + "' is already an alias of '" + alias_to_canonical_[canonical] + "'");
  }
  auto& set = entries_[canonical];
  for (const auto& a : aliases) {
    if (a == canonical) continue;
    if (entries_.count(a)) throw std::invalid_argument("alias '" + a + "' is itself a canonical name");
    if (auto it = alias_to_canonical_.find(a); it != alias_to_canonical_.end() && it->second != canonical) {
      throw std::invalid_argument("alias '" + a + "' maps to both '" + it->second + "' and '" + canonical + "'");
    }
    alias_to_canonical_[a] = canonical;
    set.insert(a);
  }
}

const std::string& AliasMap::resolve(const std::string& name) const {
  if (auto it = alias_to_canonical_.find(name); it != alias_to_canonical_.end()) return it->second;
  return name;
}

AliasMap parse_alias_map(std::istream& in) {
  AliasMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected 'canonical<TAB>aliases'", line_no);
    const auto canonical = trim(std::string_view(line).substr(0, tab));
    if (canonical.empty()) throw ParseError("empty canonical name", line_no);
    try {
      map.add(canonical, split_names(std::string_view(line).substr(tab + 1)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return map;
}

AliasMap parse_alias_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alias map " + path);
  return parse_alias_map(in);
}

std::vector<BiblioRecord> apply_aliases(std::span<const BiblioRecord> records, const AliasMap& aliases) {
  std::vector<BiblioRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    std::vector<std::string> authors;
    std::unordered_set<std::string> seen;
    for (const auto& a : r.authors) {
      const auto& c = aliases.resolve(a);
      if (seen.insert(c).second) authors.push_back(c);
    }
    r.authors = std::move(authors);
    for (auto& c : r.cited_authors) c = aliases.resolve(c);
  }
  return out;
}

Time time_index(const BiblioRecord& record, Resolution resolution, int origin_year) {
  const Time years = record.year - origin_year;
  switch (resolution) {
    case Resolution::monthly: return years * 12 + (record.month.value_or(1) - 1);
    case Resolution::yearly: return years;
    case Resolution::step: break;
  }
  throw std::invalid_argument("bibliographic networks need monthly or yearly resolution");
}

TemporalNetwork build_coauthorship(std::span<const BiblioRecord> records, Resolution resolution,
                                   const BuildOptions& options) {
  int origin = 0;
  const auto keyed = sorted_by_time(records, resolution, options, origin);
  TemporalNetwork net(resolution, false);
  if (!records.empty()) net.set_origin_year(origin);
  std::vector<NodeId> ids;
  for (const auto& [t, rec] : keyed) {
    ids.clear();
    for (const auto& a : rec->authors) {
      const NodeId id = net.add_node(a, t);
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) net.add_event(t, ids[i], ids[j]);
    }
  }
  return net;
}

TemporalNetwork build_citation(std::span<const BiblioRecord> records, Resolution resolution,
                               const CitationOptions& options) {
  int origin = 0;
  const auto keyed = sorted_by_time(records, resolution, options, origin);
  TemporalNetwork net(resolution, true);
  if (!records.empty()) net.set_origin_year(origin);

  std::unordered_set<std::string> authors;
  if (options.restrict_to_authors) {
    for (const auto& r : records) authors.insert(r.authors.begin(), r.authors.end());
  }
  for (const auto& [t, rec] : keyed) {
    std::vector<const std::string*> kept;
    for (const auto& c : rec->cited_authors) {
      if (options.restrict_to_authors && !authors.count(c)) continue;
      if (options.drop_self_citations &&
          std::find(rec->authors.begin(), rec->authors.end(), c) != rec->authors.end()) {
        continue;
      }
      kept.push_back(&c);
    }
    if (kept.empty()) continue;
    const NodeId source = net.add_source_node("record:" + rec->record_id, t);
    for (const auto* c : kept) net.add_event(t, source, net.add_node(*c, t));
  }
  return net;
}

}  // namespace fitpa
