#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fitpa/temporal_net.hpp"

namespace fitpa {

/// Portable random stream: std::mt19937_64 seeded per time step with
///   splitmix64(seed + 0x9E3779B97F4A7C15 * (step + 1)),
/// uniforms from the top 53 bits, normals by Box-Muller (cosine branch only).
/// Distribution objects from <random> are avoided because their output is
/// implementation-defined.
class StepRng {
 public:
  StepRng(std::uint64_t seed, std::uint64_t step);
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Attachment kernel A_k: either k^alpha with A_0 = 1, or an explicit table
/// (degrees past the end use the last entry).
class Kernel {
 public:
  static Kernel power(double alpha);
  static Kernel table(std::vector<double> values);

  double operator()(std::int64_t k) const;
  bool is_power() const noexcept { return exponent_.has_value(); }
  double exponent() const { return exponent_.value(); }
  const std::vector<double>& values() const noexcept { return table_; }

 private:
  std::optional<double> exponent_;
  std::vector<double> table_;
};

struct FitnessDistribution {
  enum class Kind { constant, log_normal, two_point };
  Kind kind = Kind::constant;
  double mu = 0.0;      // log-normal
  double sigma = 0.0;   // log-normal
  double low = 1.0;     // two-point
  double high = 1.0;    // two-point
  double p_high = 0.5;  // two-point

  static FitnessDistribution constant() { return {}; }
  static FitnessDistribution log_normal(double mu, double sigma) { return {Kind::log_normal, mu, sigma}; }
  static FitnessDistribution two_point(double low, double high, double p_high) {
    return {Kind::two_point, 0.0, 0.0, low, high, p_high};
  }

  double draw(StepRng& rng) const;
};

struct GeneratorConfig {
  std::int64_t n_steps = 1000;
  std::int64_t newcomers_per_step = 1;
  std::int64_t edges_per_newcomer = 1;
  Kernel kernel = Kernel::power(1.0);
  FitnessDistribution fitness;
  bool directed = true;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct GroundTruth {
  Kernel kernel = Kernel::power(1.0);
  std::vector<double> fitness;  // by node id
};

struct SyntheticNetwork {
  TemporalNetwork network;
  GroundTruth truth;
};

/// Grows a network from a seed pair joined at t = 0. At each step every
/// newcomer draws its fitness and then `edges_per_newcomer` targets, each
/// independently with probability A_{k_j} eta_j / Z over the nodes present
/// before the step, using the degrees at the start of the step.
SyntheticNetwork generate(const GeneratorConfig& config);

/// Draws indices with probability proportional to non-negative weights.
/// Backed by a Fenwick tree so weight updates and draws are O(log n).
class AttachmentSampler {
 public:
  explicit AttachmentSampler(std::size_t capacity = 0);
  void resize(std::size_t n);
  void set_weight(std::size_t i, double w);
  double weight(std::size_t i) const { return weights_[i]; }
  double total() const;
  std::size_t size() const noexcept { return weights_.size(); }
  /// `u` uniform on [0, 1).
  std::size_t draw(double u) const;

 private:
  std::vector<double> weights_;
  std::vector<double> tree_;
};

/// Histogram of model degrees after the last event, selectable nodes only.
std::map<std::int64_t, std::size_t> empirical_degree_distribution(const TemporalNetwork& net);

std::string ground_truth_to_json(const GroundTruth& truth, int indent = 2);

}  // namespace fitpa
