#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "fitpa/errors.hpp"
#include "fitpa/estimator.hpp"

namespace fitpa {

double SufficientStats::total_selections() const {
  return std::accumulate(step_selections.begin(), step_selections.end(), 0.0);
}

std::optional<std::size_t> SufficientStats::index_of(NodeId node) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

SufficientStats SufficientStats::scaled(double factor) const {
  SufficientStats out = *this;
  for (auto& v : out.step_selections) v *= factor;
  for (auto& v : out.bin_selections) v *= factor;
  for (auto& v : out.node_selections) v *= factor;
  return out;
}

SufficientStats build_sufficient_stats(const TemporalNetwork& net, const BinningScheme& scheme) {
  return build_sufficient_stats(net, DegreeBinning(scheme, net.max_degree()));
}

SufficientStats build_sufficient_stats(const TemporalNetwork& net, const DegreeBinning& binning) {
  SufficientStats st;
  st.binning = binning;
  st.nodes = net.population();
  st.node_selections.assign(st.nodes.size(), 0.0);
  st.bin_selections.assign(binning.size(), 0.0);
  st.exposure.resize(st.nodes.size());

  std::vector<std::int64_t> node_slot(net.node_count(), -1);
  for (std::size_t i = 0; i < st.nodes.size(); ++i) node_slot[st.nodes[i]] = static_cast<std::int64_t>(i);

  auto selectable_before = [&](NodeId n, Time t) {
    return node_slot[n] >= 0 && net.node(n).birth_time < t;
  };

  // Selections, grouped by time step.
  for (const auto& e : net.events()) {
    NodeId cand[2] = {e.target, e.source};
    const int n_cand = net.directed() ? 1 : 2;
    for (int c = 0; c < n_cand; ++c) {
      const NodeId n = cand[c];
      if (!selectable_before(n, e.time)) continue;
      if (st.step_times.empty() || st.step_times.back() != e.time) {
        st.step_times.push_back(e.time);
        st.step_selections.push_back(0.0);
      }
      st.step_selections.back() += 1.0;
      st.node_selections[static_cast<std::size_t>(node_slot[n])] += 1.0;
      st.bin_selections[binning.bin_of(net.degree_at(n, e.time))] += 1.0;
    }
  }

  const auto n_steps = st.step_times.size();
  const auto n_bins = binning.size();
  auto first_step_after = [&](Time t) {
    return static_cast<std::uint32_t>(std::upper_bound(st.step_times.begin(), st.step_times.end(), t) -
                                      st.step_times.begin());
  };

  // Exposure runs: the degree seen at step s counts increments strictly
  // before step_times[s], so an increment at time tau takes effect from the
  // first step after tau.
  std::vector<std::int64_t> pop_diff((n_steps + 1) * n_bins, 0);
  for (std::size_t i = 0; i < st.nodes.size(); ++i) {
    const NodeId n = st.nodes[i];
    std::uint32_t s = first_step_after(net.node(n).birth_time);
    if (s >= n_steps) continue;
    const auto& inc = net.increment_times(n);
    std::int64_t degree = net.initial_degree(n) +
                          (std::lower_bound(inc.begin(), inc.end(), st.step_times[s]) - inc.begin());
    auto next_inc = std::lower_bound(inc.begin(), inc.end(), st.step_times[s]);
    auto& runs = st.exposure[i];
    while (s < n_steps) {
      const auto bin = static_cast<std::uint32_t>(binning.bin_of(degree));
      // Advance through increments until the bin changes.
      std::uint32_t end = static_cast<std::uint32_t>(n_steps);
      while (next_inc != inc.end()) {
        const std::uint32_t effective = first_step_after(*next_inc);
        if (effective >= n_steps) {
          next_inc = inc.end();
          break;
        }
        ++degree;
        ++next_inc;
        if (binning.bin_of(degree) != bin) {
          end = effective;
          // Later increments sharing the same effective step belong to it too.
          while (next_inc != inc.end() && first_step_after(*next_inc) == effective) {
            ++degree;
            ++next_inc;
          }
          break;
        }
      }
      if (!runs.empty() && runs.back().bin == bin && runs.back().end_step == s) {
        runs.back().end_step = end;
      } else {
        runs.push_back({bin, s, end});
      }
      pop_diff[s * n_bins + bin] += 1;
      pop_diff[end * n_bins + bin] -= 1;
      s = end;
    }
  }

  st.bin_population.assign(n_steps * n_bins, 0);
  std::vector<std::int64_t> running(n_bins, 0);
  for (std::size_t s = 0; s < n_steps; ++s) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      running[b] += pop_diff[s * n_bins + b];
      st.bin_population[s * n_bins + b] = static_cast<std::uint32_t>(running[b]);
    }
  }
  return st;
}

}  // namespace fitpa
