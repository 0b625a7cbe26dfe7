#include "fitpa/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fitpa/errors.hpp"

namespace fitpa {
namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

double total_competitiveness(const TemporalNetwork& net, const EstimationResult& result, Time t) {
  double s = 0.0;
  for (NodeId n : net.active_nodes(t)) {
    s += result.attachment(net.degree_at(n, t)) * result.fitness_of(n).value;
  }
  return s;
}

double average_competitiveness(double total, std::size_t n) {
  if (n == 0) throw std::domain_error("average competitiveness undefined: no nodes exist at this time");
  return total / static_cast<double>(n);
}

double average_competency(const TemporalNetwork& net, const EstimationResult& result, Time t) {
  const auto active = net.active_nodes(t);
  if (active.empty()) throw std::domain_error("average competency undefined: no nodes exist at this time");
  double s = 0.0;
  for (NodeId n : active) s += result.fitness_of(n).value;
  return s / static_cast<double>(active.size());
}

CompetitivenessSeries build_series(const TemporalNetwork& net, const EstimationResult& result, Time t_from,
                                   Time t_to, bool anchored) {
  CompetitivenessSeries series;
  for (Time t = t_from; t <= t_to; ++t) {
    const auto active = net.active_nodes(t);
    if (active.empty() && series.times.empty()) continue;
    double s = 0.0, eta_sum = 0.0;
    for (NodeId n : active) {
      const double eta = result.fitness_of(n).value;
      s += result.attachment(net.degree_at(n, t)) * eta;
      eta_sum += eta;
    }
    series.times.push_back(t);
    series.N.push_back(active.size());
    series.S.push_back(s);
    series.S_bar.push_back(average_competitiveness(s, active.size()));
    series.C.push_back(eta_sum / static_cast<double>(active.size()));
  }
  if (series.times.empty()) throw std::domain_error("no nodes exist in the requested time range");
  return anchored ? anchor(std::move(series)) : series;
}

CompetitivenessSeries anchor(CompetitivenessSeries series) {
  if (series.anchored || series.times.empty()) return series;
  for (auto* v : {&series.S, &series.S_bar, &series.C}) {
    const double base = v->front();
    for (auto& x : *v) x /= base;
  }
  series.anchored = true;
  return series;
}

std::vector<RankedNode> rank_by_fitness(const EstimationResult& result, std::size_t top_n) {
  if (top_n == 0) throw std::invalid_argument("top_n must be at least 1");
  std::vector<RankedNode> all;
  for (const auto& f : result.eta) {
    if (f.exposed) all.push_back({f.label, f.value});
  }
  std::sort(all.begin(), all.end(), [](const RankedNode& a, const RankedNode& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.label < b.label;
  });
  if (all.size() > top_n) all.resize(top_n);
  return all;
}

std::vector<HistogramBin> fitness_histogram(const EstimationResult& result, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("histogram bin width must be positive");
  std::vector<HistogramBin> bins;
  for (const auto& f : result.eta) {
    if (!f.exposed || !std::isfinite(f.value)) continue;
    const auto j = static_cast<std::size_t>(std::floor(f.value / width));
    while (bins.size() <= j) {
      const double lo = static_cast<double>(bins.size()) * width;
      bins.push_back({lo, lo + width, 0});
    }
    ++bins[j].count;
  }
  return bins;
}

void write_series_csv(std::ostream& out, const CompetitivenessSeries& series) {
  out << "t,N,S,S_bar,C\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << fmt::format("{},{},{},{},{}\n", series.times[i], series.N[i], series.S[i], series.S_bar[i], series.C[i]);
  }
}

void write_ranking_csv(std::ostream& out, const std::vector<RankedNode>& ranking) {
  out << "rank,author,fitness\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << fmt::format("{},{},{:.3f}\n", i + 1, csv_quote(ranking[i].label), ranking[i].fitness);
  }
}

}  // namespace fitpa
