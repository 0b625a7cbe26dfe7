#pragma once

// Small random fixtures and brute-force oracles shared by the unit tests and
// the acceptance binary. The oracles replay the raw event list and never call
// the library's degree, statistics or normalization code.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fitpa/estimator.hpp"
#include "fitpa/temporal_net.hpp"

namespace fitpa::testing {

/// Integer in [lo, hi] from the raw engine output; avoids the
/// implementation-defined <random> distributions.
inline std::int64_t pick(std::mt19937_64& g, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// A network of at most `max_nodes` nodes with random births and events.
/// Every fixture has at least one selection.
inline TemporalNetwork random_fixture(std::uint64_t seed, bool directed, int max_nodes = 10) {
  std::mt19937_64 g(seed);
  for (;;) {
    const int n = static_cast<int>(pick(g, 3, max_nodes));
    const Time horizon = pick(g, 3, 8);
    TemporalNetwork net(Resolution::step, directed);
    std::vector<Time> birth;
    for (int i = 0; i < n; ++i) {
      birth.push_back(i < 2 ? 0 : pick(g, 0, horizon - 1));
      net.add_node("n" + std::to_string(i), birth.back());
    }
    int selections = 0;
    for (Time t = 0; t <= horizon; ++t) {
      const auto events = pick(g, 0, 4);
      for (std::int64_t e = 0; e < events; ++e) {
        const auto s = static_cast<NodeId>(pick(g, 0, n - 1));
        const auto d = static_cast<NodeId>(pick(g, 0, n - 1));
        if (s == d || birth[s] > t || birth[d] > t) continue;
        net.add_event(t, s, d);
        selections += (birth[d] < t) + (!directed && birth[s] < t);
      }
    }
    if (selections > 0) return net;
  }
}

/// Degree of every node just before `t`, by replaying the event list.
inline std::vector<std::int64_t> replay_degrees(const TemporalNetwork& net, Time t) {
  std::vector<std::int64_t> deg(net.node_count(), 0);
  for (NodeId i = 0; i < net.node_count(); ++i) deg[i] = net.initial_degree(i);
  for (const auto& e : net.events()) {
    if (e.time >= t) break;
    ++deg[e.target];
    if (!net.directed()) ++deg[e.source];
  }
  return deg;
}

/// Sum over selections of log(A_k eta_j / sum_i A_k eta_i) on an unsliced
/// network; `eta` is indexed by node id.
inline double brute_log_likelihood(const TemporalNetwork& net, const DegreeBinning& binning,
                                   const std::vector<double>& A, const std::vector<double>& eta) {
  double ll = 0.0;
  const auto& ev = net.events();
  for (std::size_t a = 0; a < ev.size();) {
    const Time t = ev[a].time;
    std::size_t b = a;
    while (b < ev.size() && ev[b].time == t) ++b;
    const auto deg = replay_degrees(net, t);
    double z = 0.0;
    for (NodeId i = 0; i < net.node_count(); ++i) {
      const auto& rec = net.node(i);
      if (rec.selectable && rec.birth_time < t) z += A[binning.bin_of(deg[i])] * eta[i];
    }
    auto take = [&](NodeId j) {
      const auto& rec = net.node(j);
      if (!rec.selectable || rec.birth_time >= t) return;
      ll += std::log(A[binning.bin_of(deg[j])] * eta[j] / z);
    };
    for (std::size_t e = a; e < b; ++e) {
      take(ev[e].target);
      if (!net.directed()) take(ev[e].source);
    }
    a = b;
  }
  return ll;
}

/// Fitness by node id from a result, 1 where the result has no entry.
inline std::vector<double> fitness_by_node(const TemporalNetwork& net, const EstimationResult& r) {
  std::vector<double> eta(net.node_count(), 1.0);
  for (const auto& f : r.eta) eta[f.node] = f.value;
  return eta;
}

struct BruteMetrics {
  std::size_t N = 0;
  double S = 0.0;
  double C = 0.0;
};

/// Direct sums over nodes born no later than t.
inline BruteMetrics brute_metrics(const TemporalNetwork& net, const EstimationResult& r, Time t) {
  const auto deg = replay_degrees(net, t);
  const auto eta = fitness_by_node(net, r);
  BruteMetrics m;
  double eta_sum = 0.0;
  for (NodeId i = 0; i < net.node_count(); ++i) {
    const auto& rec = net.node(i);
    if (!rec.selectable || rec.birth_time > t) continue;
    ++m.N;
    m.S += r.A[r.binning.bin_of(deg[i])] * eta[i];
    eta_sum += eta[i];
  }
  if (m.N) m.C = eta_sum / static_cast<double>(m.N);
  return m;
}


/// `key=value` lines of a fixture manifest; '#' starts a comment.
inline std::map<std::string, long> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, long> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    out[line.substr(0, eq)] = std::stol(line.substr(eq + 1));
  }
  return out;
}

}  // namespace fitpa::testing
