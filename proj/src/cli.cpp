#include "fitpa/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fitpa/errors.hpp"
#include "fitpa/ingest.hpp"
#include "fitpa/metrics.hpp"
#include "json.hpp"

namespace fitpa::cli {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool require_file(const std::string& path, const char* what, std::ostream& err) {
  if (path.empty()) {
    err << "error: no " << what << " given\n";
    return false;
  }
  if (!fs::is_regular_file(path)) {
    err << "error: cannot open " << what << " '" << path << "'\n";
    return false;
  }
  return true;
}

template <typename F>
bool write_file(const fs::path& path, std::ostream& err, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    err << "error: cannot write '" << path.string() << "'\n";
    return false;
  }
  body(out);
  return static_cast<bool>(out);
}

std::string fmt3(double v) { return std::isfinite(v) ? fmt::format("{:.3f}", v) : "nan"; }

std::string csv_number(double v) { return std::isfinite(v) ? fmt::format("{}", v) : "nan"; }

}  // namespace

std::vector<Period> resolve_periods(const TemporalNetwork& net, const std::vector<std::string>& specs) {
  std::vector<Period> out;
  if (specs.empty()) {
    out.push_back({"all", net.first_time(), net.last_time()});
    return out;
  }
  const bool calendar = net.origin_year() && net.resolution() != Resolution::step;
  for (const auto& spec : specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("period '" + spec + "' is not of the form A:B");
    long long a = 0, b = 0;
    try {
      std::size_t used = 0;
      a = std::stoll(spec.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("");
      b = std::stoll(spec.substr(colon + 1), &used);
      if (used != spec.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("period '" + spec + "' is not of the form A:B");
    }
    if (a > b) throw std::invalid_argument("period '" + spec + "' ends before it starts");
    Period p{fmt::format("{}-{}", a, b), a, b};
    if (calendar) {
      const int origin = *net.origin_year();
      if (net.resolution() == Resolution::monthly) {
        p.start = (a - origin) * 12;
        p.end = (b - origin) * 12 + 11;
      } else {
        p.start = a - origin;
        p.end = b - origin;
      }
    }
    if (!out.empty() && p.start <= out.back().end) {
      throw std::invalid_argument("periods must be ascending and non-overlapping");
    }
    out.push_back(std::move(p));
  }
  return out;
}

int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo) {
  if (!require_file(opt.records, "record file", err)) return kInputError;
  if (!opt.aliases.empty() && !require_file(opt.aliases, "alias map", err)) return kInputError;
  if (opt.kind != "coauthorship" && opt.kind != "citation") {
    err << "error: unknown network kind '" << opt.kind << "'\n";
    return kInputError;
  }
  try {
    auto records = parse_records(opt.records);
    if (!opt.aliases.empty()) records = apply_aliases(records, parse_alias_map(opt.aliases));
    const bool citation = opt.kind == "citation";
    const Resolution res =
        opt.resolution.empty() ? (citation ? Resolution::yearly : Resolution::monthly) : parse_resolution(opt.resolution);
    std::vector<std::string> warnings;
    TemporalNetwork net;
    if (citation) {
      CitationOptions co;
      co.origin_year = opt.origin_year;
      co.warnings = &warnings;
      co.restrict_to_authors = opt.restrict_to_authors;
      co.drop_self_citations = opt.drop_self_citations;
      net = build_citation(records, res, co);
    } else {
      BuildOptions bo;
      bo.origin_year = opt.origin_year;
      bo.warnings = &warnings;
      net = build_coauthorship(records, res, bo);
    }
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    if (opt.out.empty()) {
      err << "error: no output path given\n";
      return kInputError;
    }
    save_network(opt.out, net, lines_of(echo));
    out << "nodes=" << net.selectable_count() << " events=" << net.event_count() << '\n';
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

int cmd_estimate(const EstimateOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo) {
  if (!require_file(opt.network, "network file", err)) return kInputError;
  TemporalNetwork net;
  std::vector<Period> periods;
  try {
    opt.config.validate();
    if (!(opt.hist_width > 0.0)) throw std::invalid_argument("histogram width must be positive");
    net = load_network(opt.network);
    periods = resolve_periods(net, opt.periods);
    fs::create_directories(opt.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  int status = kOk;
  const fs::path dir(opt.out_dir);
  std::ostringstream summary;
  summary << "period,t_start,t_end,alpha,alpha_stderr,iterations,converged\n";
  out << fmt::format("{:<12} {:>8} {:>8} {:>10} {:>9}\n", "period", "alpha", "2sigma", "iterations", "converged");
  for (const auto& p : periods) {
    const TemporalNetwork slice = opt.periods.empty() ? net : net.slice_period(p.start, p.end, opt.carry_degrees);
    EstimationResult r;
    try {
      r = estimate(slice, opt.config);
    } catch (const EstimationError& e) {
      err << "error: period " << p.label << ": " << e.what() << '\n';
      status = kNumericalFailure;
      continue;
    }
    r.carry_degrees = opt.carry_degrees;
    if (!r.converged) {
      err << "warning: period " << p.label << " did not converge in " << r.iterations << " iterations\n";
    }

    auto doc = nlohmann::json::parse(result_to_json(r, -1));
    doc["period_label"] = p.label;
    doc["effective_config"] = lines_of(echo);
    bool ok = write_file(dir / ("result_" + p.label + ".json"), err, [&](std::ostream& f) { f << doc.dump(2) << '\n'; });
    ok = ok && write_file(dir / ("pa_" + p.label + ".csv"), err, [&](std::ostream& f) {
      f << "bin_lo,bin_hi,k_rep,A,sigma_logA,lower_2sigma,upper_2sigma,selections\n";
      for (std::size_t b = 0; b < r.binning.size(); ++b) {
        const double s = r.A_sigma[b];
        f << r.binning.lo(b) << ',' << r.binning.hi(b) << ',' << csv_number(r.binning.representative(b)) << ','
          << csv_number(r.A[b]) << ',' << csv_number(s) << ',' << csv_number(r.A[b] * std::exp(-2.0 * s)) << ','
          << csv_number(r.A[b] * std::exp(2.0 * s)) << ',' << csv_number(r.bin_selections[b]) << '\n';
      }
    });
    ok = ok && write_file(dir / ("fitness_hist_" + p.label + ".csv"), err, [&](std::ostream& f) {
      f << "lo,hi,count\n";
      for (const auto& h : fitness_histogram(r, opt.hist_width)) {
        f << csv_number(h.lo) << ',' << csv_number(h.hi) << ',' << h.count << '\n';
      }
    });
    if (!ok) return kInputError;

    summary << p.label << ',' << p.start << ',' << p.end << ',' << csv_number(r.alpha) << ','
            << csv_number(r.alpha_stderr) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
    out << fmt::format("{:<12} {:>8} {:>8} {:>10} {:>9}\n", p.label, fmt3(r.alpha), fmt3(2.0 * r.alpha_stderr),
                       r.iterations, r.converged ? "yes" : "no");
  }
  if (!write_file(dir / "summary.csv", err, [&](std::ostream& f) { f << summary.str(); })) return kInputError;
  if (!write_file(dir / "run_config.txt", err, [&](std::ostream& f) { f << echo; })) return kInputError;
  return status;
}

int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo) {
  if (!require_file(opt.network, "network file", err)) return kInputError;
  if (!fs::is_directory(opt.results_dir)) {
    err << "error: cannot open results directory '" << opt.results_dir << "'\n";
    return kInputError;
  }
  if (opt.top_n == 0) {
    err << "error: --top must be at least 1\n";
    return kInputError;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.results_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("result_", 0) == 0 && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "error: no result_*.json files in '" << opt.results_dir << "'\n";
    return kInputError;
  }

  TemporalNetwork net;
  try {
    net = load_network(opt.network);
    fs::create_directories(opt.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const fs::path dir(opt.out_dir);
  for (const auto& file : files) {
    const auto stem = file.stem().string();
    const auto label = stem.substr(std::string("result_").size());
    EstimationResult r;
    try {
      std::ifstream in(file);
      std::stringstream buf;
      buf << in.rdbuf();
      r = result_from_json(buf.str());
    } catch (const std::exception& e) {
      err << "error: " << file.string() << ": " << e.what() << '\n';
      return kInputError;
    }
    for (const auto& f : r.eta) {
      if (f.node >= net.node_count() || !net.node(f.node).selectable ||
          (!f.label.empty() && net.node(f.node).label != f.label)) {
        err << "error: " << file.string() << ": node " << f.node << " ('" << f.label
            << "') does not match the network\n";
        return kInputError;
      }
    }
    const TemporalNetwork slice = r.period ? net.slice_period(r.period->start, r.period->end, r.carry_degrees) : net;
    const Time from = r.period ? r.period->start : net.first_time();
    const Time to = r.period ? r.period->end : net.last_time();
    CompetitivenessSeries series;
    try {
      series = build_series(slice, r, from, to, opt.anchored);
    } catch (const CoverageError& e) {
      err << "error: " << file.string() << ": " << e.what() << '\n';
      return kInputError;
    } catch (const std::domain_error& e) {
      err << "error: period " << label << ": " << e.what() << '\n';
      return kNumericalFailure;
    }
    const auto ranking = rank_by_fitness(r, opt.top_n);
    bool ok = write_file(dir / ("series_" + label + ".csv"), err, [&](std::ostream& f) { write_series_csv(f, series); });
    ok = ok && write_file(dir / ("ranking_" + label + ".csv"), err,
                          [&](std::ostream& f) { write_ranking_csv(f, ranking); });
    if (!ok) return kInputError;
    out << fmt::format("{}: times={} N_end={} S_end={} S_bar_end={} C_end={}\n", label, series.size(),
                       series.N.back(), fmt3(series.S.back()), fmt3(series.S_bar.back()), fmt3(series.C.back()));
  }
  if (!write_file(dir / "run_config.txt", err, [&](std::ostream& f) { f << echo; })) return kInputError;
  return kOk;
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err, const std::string& echo) {
  try {
    opt.config.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: invalid generator config: " << e.what() << '\n';
    return kInputError;
  }
  if (opt.out_network.empty()) {
    err << "error: no --out-network given\n";
    return kInputError;
  }
  const auto syn = generate(opt.config);
  try {
    save_network(opt.out_network, syn.network, lines_of(echo));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (!opt.out_truth.empty()) {
    if (!write_file(opt.out_truth, err, [&](std::ostream& f) { f << ground_truth_to_json(syn.truth) << '\n'; })) {
      return kInputError;
    }
  }
  out << "nodes=" << syn.network.selectable_count() << " events=" << syn.network.event_count() << '\n';
  return kOk;
}

namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

/// Expands `--config FILE` (flat `key = value` lines) into flags placed
/// right after the subcommand name, skipping keys given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open config file '" + path + "'");

  auto given = [&](const std::string& key) {
    for (const auto& a : args) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0 || a == "--no-" + key) return true;
    }
    return false;
  };
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line[first] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "expected key = value: " + line);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\""));
      s.erase(s.find_last_not_of(" \t\r\"") + 1);
      return s;
    };
    const auto key = normalize_key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (key == "config" || given(key)) continue;
    injected.push_back("--" + key + "=" + value);
  }
  std::vector<std::string> out;
  out.push_back(args[0]);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preferential attachment and fitness estimation for temporal networks", "fitpa"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_file;

  IngestOptions ingest;
  auto* ing = app.add_subcommand("ingest", "Build a temporal network from bibliographic records");
  ing->add_option("--records", ingest.records, "Record CSV")->required();
  ing->add_option("--aliases", ingest.aliases, "Alias map (canonical<TAB>alias;alias)");
  ing->add_option("--kind", ingest.kind, "coauthorship or citation")->check(CLI::IsMember({"coauthorship", "citation"}));
  ing->add_option("--resolution", ingest.resolution, "monthly or yearly");
  ing->add_option("--origin", ingest.origin_year, "Calendar year of time index 0");
  ing->add_flag("--restrict,!--no-restrict", ingest.restrict_to_authors, "Keep only cited names that author a record");
  ing->add_flag("--drop-self-citations", ingest.drop_self_citations);
  ing->add_option("--out", ingest.out, "Output network file")->required();
  ing->add_option("--config", config_file, "Flat key = value file; flags override it");

  EstimateOptions est;
  auto* es = app.add_subcommand("estimate", "Estimate A_k and fitness per period");
  es->add_option("--network", est.network)->required();
  es->add_option("--out-dir", est.out_dir)->required();
  es->add_option("--period", est.periods, "A:B, repeatable or comma separated")->delimiter(',');
  es->add_flag("--carry,!--no-carry", est.carry_degrees, "Carry degrees into each period");
  es->add_option("--lambda", est.config.smoothing, "Curvature penalty weight");
  es->add_option("--shape", est.config.fitness_shape, "Fitness prior shape (> 1)");
  es->add_option("--max-iter", est.config.max_iterations);
  es->add_option("--tol", est.config.tolerance);
  es->add_option("--grad-tol", est.config.gradient_tolerance);
  es->add_option("--per-degree-until", est.config.binning.per_degree_until);
  es->add_option("--log-base", est.config.binning.log_base);
  bool no_fitness = false;
  es->add_flag("--no-fitness", no_fitness, "Fix all fitness at 1");
  es->add_option("--hist-width", est.hist_width, "Fitness histogram bin width");
  es->add_option("--config", config_file);

  MetricsOptions met;
  auto* me = app.add_subcommand("metrics", "Competitiveness series and fitness rankings");
  me->add_option("--network", met.network)->required();
  me->add_option("--results", met.results_dir, "Directory holding result_*.json")->required();
  me->add_option("--out-dir", met.out_dir)->required();
  me->add_option("--top", met.top_n);
  me->add_flag("--anchored,!--unanchored", met.anchored);
  me->add_option("--config", config_file);

  SynthOptions syn;
  auto* sy = app.add_subcommand("synth", "Generate a network with known A_k and fitness");
  std::optional<double> alpha;
  std::vector<double> kernel_table;
  std::string fitness_kind = "constant";
  double mu = 0.0, sigma = 0.0, eta_lo = 1.0, eta_hi = 2.0, p_high = 0.5;
  bool undirected = false;
  sy->add_option("--steps", syn.config.n_steps);
  sy->add_option("--newcomers", syn.config.newcomers_per_step);
  sy->add_option("--edges", syn.config.edges_per_newcomer);
  auto* alpha_opt = sy->add_option("--alpha", alpha, "A_k = k^alpha, A_0 = 1");
  sy->add_option("--kernel-table", kernel_table, "Explicit A_0,A_1,...")->delimiter(',')->excludes(alpha_opt);
  sy->add_option("--fitness", fitness_kind)->check(CLI::IsMember({"constant", "lognormal", "two-point"}));
  sy->add_option("--mu", mu);
  sy->add_option("--sigma", sigma);
  sy->add_option("--eta-lo", eta_lo);
  sy->add_option("--eta-hi", eta_hi);
  sy->add_option("--p-high", p_high);
  sy->add_flag("--undirected", undirected);
  sy->add_option("--seed", syn.config.seed);
  sy->add_option("--out-network", syn.out_network)->required();
  sy->add_option("--out-truth", syn.out_truth);
  sy->add_option("--config", config_file);

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  auto echo_of = [](CLI::App* sub) { return sub->config_to_str(true, false); };
  if (*ing) return cmd_ingest(ingest, out, err, echo_of(ing));
  if (*es) {
    est.config.estimate_fitness = !no_fitness;
    return cmd_estimate(est, out, err, echo_of(es));
  }
  if (*me) return cmd_metrics(met, out, err, echo_of(me));
  if (*sy) {
    try {
      if (!kernel_table.empty()) {
        syn.config.kernel = Kernel::table(kernel_table);
      } else {
        syn.config.kernel = Kernel::power(alpha.value_or(1.0));
      }
    } catch (const std::invalid_argument& e) {
      err << "error: invalid generator config: " << e.what() << '\n';
      return kInputError;
    }
    if (fitness_kind == "lognormal") syn.config.fitness = FitnessDistribution::log_normal(mu, sigma);
    if (fitness_kind == "two-point") syn.config.fitness = FitnessDistribution::two_point(eta_lo, eta_hi, p_high);
    syn.config.directed = !undirected;
    return cmd_synth(syn, out, err, echo_of(sy));
  }
  return kInputError;
}

}  // namespace fitpa::cli
