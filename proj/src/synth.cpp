#include "fitpa/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace fitpa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

StepRng::StepRng(std::uint64_t seed, std::uint64_t step)
    : engine_(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (step + 1))) {}

double StepRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double StepRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Kernel Kernel::power(double alpha) {
  Kernel k;
  k.exponent_ = alpha;
  return k;
}

Kernel Kernel::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("kernel table is empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("kernel table must be strictly positive");
  }
  Kernel k;
  k.table_ = std::move(values);
  return k;
}

double Kernel::operator()(std::int64_t k) const {
  if (exponent_) return k == 0 ? 1.0 : std::pow(static_cast<double>(k), *exponent_);
  return table_[std::min<std::size_t>(static_cast<std::size_t>(k), table_.size() - 1)];
}

double FitnessDistribution::draw(StepRng& rng) const {
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::log_normal: return std::exp(mu + sigma * rng.normal());
    case Kind::two_point: return rng.uniform() < p_high ? high : low;
  }
  return 1.0;
}

void GeneratorConfig::validate() const {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be positive");
  if (newcomers_per_step < 1) throw std::invalid_argument("newcomers_per_step must be positive");
  if (edges_per_newcomer < 1) throw std::invalid_argument("edges_per_newcomer must be positive");
  if (kernel.is_power() && !std::isfinite(kernel.exponent())) throw std::invalid_argument("alpha must be finite");
  switch (fitness.kind) {
    case FitnessDistribution::Kind::constant: break;
    case FitnessDistribution::Kind::log_normal:
      if (!(fitness.sigma >= 0.0) || !std::isfinite(fitness.mu)) throw std::invalid_argument("log-normal needs sigma >= 0");
      break;
    case FitnessDistribution::Kind::two_point:
      if (!(fitness.p_high >= 0.0 && fitness.p_high <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
      if (!(fitness.low > 0.0) || !(fitness.high > 0.0)) throw std::invalid_argument("fitness values must be positive");
      break;
  }
}

AttachmentSampler::AttachmentSampler(std::size_t capacity) { resize(capacity); }

void AttachmentSampler::resize(std::size_t n) {
  if (n < weights_.size()) throw std::invalid_argument("sampler cannot shrink");
  const std::size_t old = weights_.size();
  auto prefix = [&](std::size_t j) {
    double s = 0.0;
    for (; j > 0; j -= j & (~j + 1)) s += tree_[j];
    return s;
  };
  // A new tree node j covers (j - lowbit(j), j], which can reach into the
  // existing weights.
  const double all = prefix(old);
  weights_.resize(n, 0.0);
  tree_.resize(n + 1, 0.0);
  for (std::size_t j = old + 1; j <= n; ++j) {
    const std::size_t from = j - (j & (~j + 1));
    tree_[j] = from < old ? all - prefix(from) : 0.0;
  }
}

void AttachmentSampler::set_weight(std::size_t i, double w) {
  if (!(w >= 0.0)) throw std::invalid_argument("negative sampling weight");
  const double delta = w - weights_[i];
  weights_[i] = w;
  for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
}

double AttachmentSampler::total() const {
  double s = 0.0;
  for (std::size_t j = weights_.size(); j > 0; j -= j & (~j + 1)) s += tree_[j];
  return s;
}

std::size_t AttachmentSampler::draw(double u) const {
  double target = u * total();
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 <= weights_.size()) step *= 2;
  for (; step > 0; step /= 2) {
    if (pos + step <= weights_.size() && tree_[pos + step] <= target) {
      pos += step;
      target -= tree_[pos];
    }
  }
  // Rounding can land past the last positive weight.
  if (pos >= weights_.size()) pos = weights_.size() - 1;
  while (pos > 0 && weights_[pos] == 0.0) --pos;
  return pos;
}

SyntheticNetwork generate(const GeneratorConfig& config) {
  config.validate();
  SyntheticNetwork out{TemporalNetwork(Resolution::step, config.directed), GroundTruth{config.kernel, {}}};
  auto& net = out.network;
  auto& fitness = out.truth.fitness;
  std::vector<std::int64_t> degree;
  AttachmentSampler sampler;

  auto new_node = [&](Time t, double eta) {
    const NodeId id = net.add_node("v" + std::to_string(net.node_count()), t);
    fitness.push_back(eta);
    degree.push_back(0);
    return id;
  };

  {
    StepRng rng(config.seed, 0);
    const NodeId a = new_node(0, config.fitness.draw(rng));
    const NodeId b = new_node(0, config.fitness.draw(rng));
    net.add_event(0, b, a);
    ++degree[a];
    if (!config.directed) ++degree[b];
    sampler.resize(2);
    sampler.set_weight(a, config.kernel(degree[a]) * fitness[a]);
    sampler.set_weight(b, config.kernel(degree[b]) * fitness[b]);
  }

  std::vector<std::pair<NodeId, NodeId>> pending;
  std::vector<NodeId> touched;
  for (Time t = 1; t <= config.n_steps; ++t) {
    StepRng rng(config.seed, static_cast<std::uint64_t>(t));
    pending.clear();
    const auto first_new = static_cast<NodeId>(net.node_count());
    for (std::int64_t j = 0; j < config.newcomers_per_step; ++j) {
      const NodeId id = new_node(t, config.fitness.draw(rng));
      for (std::int64_t e = 0; e < config.edges_per_newcomer; ++e) {
        pending.emplace_back(id, static_cast<NodeId>(sampler.draw(rng.uniform())));
      }
    }
    touched.clear();
    for (const auto& [src, tgt] : pending) {
      net.add_event(t, src, tgt);
      ++degree[tgt];
      touched.push_back(tgt);
      if (!config.directed) ++degree[src];
    }
    sampler.resize(net.node_count());
    for (NodeId n : touched) sampler.set_weight(n, config.kernel(degree[n]) * fitness[n]);
    for (NodeId n = first_new; n < net.node_count(); ++n) sampler.set_weight(n, config.kernel(degree[n]) * fitness[n]);
  }
  return out;
}

std::map<std::int64_t, std::size_t> empirical_degree_distribution(const TemporalNetwork& net) {
  std::map<std::int64_t, std::size_t> hist;
  const Time after = net.last_time() + 1;
  for (const auto& n : net.nodes()) {
    if (n.selectable) ++hist[net.degree_at(n.id, after)];
  }
  return hist;
}

std::string ground_truth_to_json(const GroundTruth& truth, int indent) {
  nlohmann::json doc;
  if (truth.kernel.is_power()) {
    doc["kernel"] = {{"type", "power"}, {"alpha", truth.kernel.exponent()}};
  } else {
    doc["kernel"] = {{"type", "table"}, {"values", truth.kernel.values()}};
  }
  auto fit = nlohmann::json::array();
  for (std::size_t i = 0; i < truth.fitness.size(); ++i) fit.push_back({{"node_id", i}, {"value", truth.fitness[i]}});
  doc["fitness"] = std::move(fit);
  return doc.dump(indent);
}

}  // namespace fitpa
