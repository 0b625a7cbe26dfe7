#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fitpa/temporal_net.hpp"

namespace fitpa {

struct BiblioRecord {
  std::string record_id;
  int year = 0;
  std::optional<int> month;
  std::vector<std::string> authors;
  std::vector<std::string> cited_authors;
};

/// Parses the record CSV: header `record_id,date,authors,cited_authors`,
/// `date` as YYYY or YYYY-MM, names joined by ';' inside one quoted field.
/// Throws ParseError naming the offending line.
std::vector<BiblioRecord> parse_records(std::istream& in);
std::vector<BiblioRecord> parse_records(const std::string& path);

/// Canonical name -> aliases.
class AliasMap {
 public:
  /// Throws std::invalid_argument when an alias already belongs to another
  /// canonical, or when a canonical is someone else's alias.
  void add(const std::string& canonical, const std::vector<std::string>& aliases);

  /// The canonical form of `name`, or `name` itself.
  const std::string& resolve(const std::string& name) const;

  bool empty() const noexcept { return alias_to_canonical_.empty(); }
  std::size_t alias_count() const noexcept { return alias_to_canonical_.size(); }
  const std::map<std::string, std::set<std::string>>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::set<std::string>> entries_;
  std::map<std::string, std::string> alias_to_canonical_;
};

/// Lines `canonical<TAB>alias1;alias2;...`; '#' starts a comment line.
AliasMap parse_alias_map(std::istream& in);
AliasMap parse_alias_map(const std::string& path);

/// Replaces aliases in author and cited lists, then drops repeated authors
/// within a record (first occurrence kept). Cited lists keep repeats.
std::vector<BiblioRecord> apply_aliases(std::span<const BiblioRecord> records, const AliasMap& aliases);

struct BuildOptions {
  /// Calendar year of time index 0; defaults to the earliest record year.
  std::optional<int> origin_year;
  /// Receives one message per record whose month had to be assumed.
  std::vector<std::string>* warnings = nullptr;
};

/// Monthly index = (year - origin) * 12 + (month - 1); yearly = year - origin.
Time time_index(const BiblioRecord& record, Resolution resolution, int origin_year);

/// Undirected network: every author is born at their first record; each
/// record adds one event per unordered author pair.
TemporalNetwork build_coauthorship(std::span<const BiblioRecord> records, Resolution resolution = Resolution::monthly,
                                   const BuildOptions& options = {});

struct CitationOptions : BuildOptions {
  /// Keep only cited names that also author some record.
  bool restrict_to_authors = true;
  /// Drop citations from a record to one of its own authors.
  bool drop_self_citations = false;
};

/// Directed network: each citation is an event from a non-selectable
/// per-record source node to the cited author, who is born at the first
/// citation received.
TemporalNetwork build_citation(std::span<const BiblioRecord> records, Resolution resolution = Resolution::yearly,
                               const CitationOptions& options = {});

}  // namespace fitpa
