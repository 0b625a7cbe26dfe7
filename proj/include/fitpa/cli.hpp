#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fitpa/estimator.hpp"
#include "fitpa/synth.hpp"

namespace fitpa::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalFailure = 3 };

struct IngestOptions {
  std::string records;
  std::string aliases;
  std::string kind = "coauthorship";
  std::string resolution;  // empty: monthly for co-authorship, yearly for citation
  std::optional<int> origin_year;
  bool restrict_to_authors = true;
  bool drop_self_citations = false;
  std::string out;
};

struct Period {
  std::string label;
  Time start = 0;
  Time end = 0;
};

struct EstimateOptions {
  std::string network;
  std::string out_dir;
  std::vector<std::string> periods;  // "A:B", calendar years when the network has an origin
  bool carry_degrees = true;
  EstimationConfig config;
  double hist_width = 0.25;
};

struct MetricsOptions {
  std::string network;
  std::string results_dir;
  std::string out_dir;
  std::size_t top_n = 10;
  bool anchored = true;
};

struct SynthOptions {
  GeneratorConfig config;
  std::string out_network;
  std::string out_truth;
};

/// Calendar or raw period specs to time windows, validated as ascending and
/// non-overlapping. Throws std::invalid_argument.
std::vector<Period> resolve_periods(const TemporalNetwork& net, const std::vector<std::string>& specs);

int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo = {});
int cmd_estimate(const EstimateOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo = {});
int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo = {});
int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo = {});

/// Parses `args` (without the program name) and dispatches to a command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fitpa::cli
