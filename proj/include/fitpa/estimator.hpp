#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fitpa/binning.hpp"
#include "fitpa/temporal_net.hpp"

namespace fitpa {

struct EstimationConfig {
  /// Weight on the squared second differences of log A across adjacent bins.
  double smoothing = 1.0;
  /// Shape of the mean-one-mode gamma prior on fitness; must exceed 1.
  /// Near 1 the prior is too weak: nodes with a handful of selections get
  /// fitness that soaks up the degree dependence and drags alpha down.
  double fitness_shape = 10.0;
  int max_iterations = 2000;
  /// Relative change of the penalized objective that counts as converged.
  double tolerance = 1e-8;
  /// Also required for convergence: every component of the objective
  /// gradient, divided by its count term (m_b for a bin, c_i + s - 1 for a
  /// fitness), at most this. The objective can flatten out well before the
  /// gradient does, and the tail bins of a strongly superlinear kernel are
  /// poorly conditioned, so the default is tight.
  double gradient_tolerance = 1e-10;
  BinningScheme binning;
  /// False fixes every fitness at 1 (attachment-function-only estimation).
  bool estimate_fitness = true;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Selection counts extracted from a network, grouped by time step, degree
/// bin and node. Only time steps with at least one selection are stored.
///
/// A selection is an endpoint of an event that existed before the event's
/// time step: the target of a directed event, or either endpoint of an
/// undirected one. Degrees are the state at the start of the step, so all
/// events sharing a time step see the same degrees.
struct SufficientStats {
  struct Segment {
    std::uint32_t bin;
    std::uint32_t first_step;  // inclusive
    std::uint32_t end_step;    // exclusive
  };

  DegreeBinning binning;
  std::vector<Time> step_times;
  std::vector<double> step_selections;  // m(t)
  std::vector<double> bin_selections;   // m_b
  std::vector<NodeId> nodes;            // estimated population, ascending ids
  std::vector<double> node_selections;  // c_i, aligned with `nodes`
  /// Per node: maximal runs of steps during which the node was at risk with
  /// its degree inside one bin. Empty for nodes never at risk.
  std::vector<std::vector<Segment>> exposure;
  /// Number of at-risk nodes per (step, bin), row-major by step.
  std::vector<std::uint32_t> bin_population;

  std::size_t step_count() const noexcept { return step_times.size(); }
  std::size_t bin_count() const noexcept { return binning.size(); }
  std::size_t node_count() const noexcept { return nodes.size(); }
  bool exposed(std::size_t i) const { return !exposure[i].empty(); }
  double total_selections() const;
  std::optional<std::size_t> index_of(NodeId node) const;
  std::uint32_t population(std::size_t step, std::size_t bin) const {
    return bin_population[step * bin_count() + bin];
  }

  /// Same degree trajectories with every selection count multiplied.
  SufficientStats scaled(double factor) const;
};

SufficientStats build_sufficient_stats(const TemporalNetwork& net, const DegreeBinning& binning);
/// Builds the binning from the scheme and the network's largest degree.
SufficientStats build_sufficient_stats(const TemporalNetwork& net, const BinningScheme& scheme);

/// Bins with no selections are tied to their estimated neighbours: log A is
/// linearly interpolated by bin index between the nearest selected bins and
/// held constant beyond the outermost ones. Returns A with tied bins filled.
std::vector<double> tie_empty_bins(const SufficientStats& stats, std::span<const double> A);
bool is_free_bin(const SufficientStats& stats, std::size_t bin);

/// Exact log-likelihood of all selections under P_i(t) proportional to A_{bin(k_i(t))} * eta_i.
/// Throws std::domain_error on non-positive parameters.
double log_likelihood(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta);

/// log-likelihood minus the curvature penalty on log A plus the gamma prior
/// on fitness (omitted when fitness is not estimated).
double penalized_objective(const SufficientStats& stats, std::span<const double> A,
                           std::span<const double> eta, const EstimationConfig& config);

/// One minorize-maximize step for A with fitness held fixed.
std::vector<double> update_A(const SufficientStats& stats, std::span<const double> A,
                             std::span<const double> eta, const EstimationConfig& config);

/// One minorize-maximize step for fitness with A held fixed. Unexposed nodes stay at 1.
std::vector<double> update_fitness(const SufficientStats& stats, std::span<const double> A,
                                   std::span<const double> eta, const EstimationConfig& config);

struct ObjectiveGradient {
  std::vector<double> log_A;    // per bin; zero for tied bins (they follow their neighbours)
  std::vector<double> log_eta;  // per node; zero for unexposed nodes
};

/// Gradient of the penalized objective with respect to log A of the selected
/// bins (tied bins move with them) and log fitness of exposed nodes.
ObjectiveGradient objective_gradient(const SufficientStats& stats, std::span<const double> A,
                                     std::span<const double> eta, const EstimationConfig& config);

struct FitState {
  std::vector<double> A;
  std::vector<double> eta;
  std::vector<double> objective_trace;  // starts with the initial objective
  int iterations = 0;
  bool converged = false;
};

struct StartingPoint {
  std::vector<double> A;
  std::vector<double> eta;
};

/// Alternating updates until the relative objective change drops below the
/// tolerance. Returns the raw, unnormalized optimum.
FitState fit(const SufficientStats& stats, const EstimationConfig& config,
             const std::optional<StartingPoint>& start = std::nullopt);

struct ExponentFit {
  double alpha = 0.0;
  double standard_error = 0.0;
};

/// Weighted least squares of log A against log of the bin representative.
/// Bins holding only degree 0, or with zero weight, are ignored.
ExponentFit fit_attachment_exponent(const DegreeBinning& binning, std::span<const double> A,
                                    std::span<const double> weights);

struct StandardErrors {
  std::vector<double> log_A_sigma;
  /// Set when the information matrix was not positive definite and the
  /// per-bin curvature was used instead.
  bool fallback = false;
};

/// Standard deviations of log A from the inverse observed information of the
/// penalized objective, with fitness held at its estimate and the degree-0
/// bin fixed by normalization.
StandardErrors standard_errors(const SufficientStats& stats, std::span<const double> A,
                               std::span<const double> eta, const EstimationConfig& config);

struct NodeFitness {
  NodeId node = 0;
  std::string label;
  double value = 1.0;
  bool exposed = false;
};

struct EstimationResult {
  DegreeBinning binning;
  std::vector<double> A;
  std::vector<double> A_sigma;  // of log A
  std::vector<double> bin_selections;
  std::vector<NodeFitness> eta;
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  std::vector<double> objective_trace;
  /// Objective at the normalized parameters minus the last trace entry; the
  /// fitness prior is not invariant to rescaling.
  double normalization_shift = 0.0;
  bool converged = false;
  int iterations = 0;
  bool sigma_fallback = false;
  EstimationConfig config;
  std::optional<TemporalNetwork::Window> period;
  bool carry_degrees = true;

  double attachment(std::int64_t degree) const { return A[binning.bin_of(degree)]; }
  /// Throws CoverageError when the node is not part of the result.
  const NodeFitness& fitness_of(NodeId node) const;
  void build_index();

 private:
  std::unordered_map<NodeId, std::size_t> index_;
};

/// Full pipeline: statistics, fit, normalization (A at degree 0 equal to 1,
/// mean fitness 1), exponent and standard errors.
/// Throws EstimationError when the network has no selections.
EstimationResult estimate(const TemporalNetwork& net, const EstimationConfig& config,
                          const std::optional<StartingPoint>& start = std::nullopt);

/// Normalizes a raw fit and fills in the derived quantities.
EstimationResult finalize(const TemporalNetwork& net, const SufficientStats& stats,
                          const EstimationConfig& config, FitState state);

std::string result_to_json(const EstimationResult& result, int indent = 2);
EstimationResult result_from_json(const std::string& text);

}  // namespace fitpa
