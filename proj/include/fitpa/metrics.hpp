#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fitpa/estimator.hpp"
#include "fitpa/temporal_net.hpp"

namespace fitpa {

/// Aligned per-time competition series. S is the sum of A_k * eta over the
/// nodes that exist at t, S_bar = S / N and C is the mean fitness.
struct CompetitivenessSeries {
  std::vector<Time> times;
  std::vector<std::size_t> N;
  std::vector<double> S;
  std::vector<double> S_bar;
  std::vector<double> C;
  /// When set, S, S_bar and C are divided by their values at times.front().
  bool anchored = false;

  std::size_t size() const noexcept { return times.size(); }
};

/// Throws CoverageError when an active node has no fitness in the result.
double total_competitiveness(const TemporalNetwork& net, const EstimationResult& result, Time t);

/// Throws std::domain_error when N is zero.
double average_competitiveness(double total, std::size_t n);

double average_competency(const TemporalNetwork& net, const EstimationResult& result, Time t);

/// Series over [t_from, t_to], starting at the first time with an active
/// node. Throws std::domain_error when no node exists in the range.
CompetitivenessSeries build_series(const TemporalNetwork& net, const EstimationResult& result, Time t_from,
                                   Time t_to, bool anchored = true);

/// Divides each series by its first value.
CompetitivenessSeries anchor(CompetitivenessSeries series);

struct RankedNode {
  std::string label;
  double fitness = 0.0;
};

/// Exposed nodes by descending fitness, ties by ascending label.
std::vector<RankedNode> rank_by_fitness(const EstimationResult& result, std::size_t top_n);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Fitness of exposed nodes in bins [j*width, (j+1)*width).
std::vector<HistogramBin> fitness_histogram(const EstimationResult& result, double width);

/// Header `t,N,S,S_bar,C`, one row per time, shortest round-trip decimals.
void write_series_csv(std::ostream& out, const CompetitivenessSeries& series);
/// Header `rank,author,fitness`, fitness to 3 decimals.
void write_ranking_csv(std::ostream& out, const std::vector<RankedNode>& ranking);

}  // namespace fitpa
