#include "fitpa/temporal_net.hpp"

#include <algorithm>
#include <string>

#include "fitpa/errors.hpp"

namespace fitpa {

std::string_view to_string(Resolution r) {
  switch (r) {
    case Resolution::monthly: return "monthly";
    case Resolution::yearly: return "yearly";
    case Resolution::step: return "step";
  }
  return "step";
}

Resolution parse_resolution(std::string_view s) {
  if (s == "monthly") return Resolution::monthly;
  if (s == "yearly") return Resolution::yearly;
  if (s == "step" || s == "generic-step") return Resolution::step;
  throw std::invalid_argument("unknown resolution '" + std::string(s) + "'");
}

std::size_t DegreeTable::at(Time t, std::size_t k) const {
  if (t < t_from || t - t_from >= static_cast<Time>(rows.size())) return 0;
  const auto& row = rows[static_cast<std::size_t>(t - t_from)];
  return k < row.size() ? row[k] : 0;
}

TemporalNetwork::TemporalNetwork(Resolution resolution, bool directed)
    : resolution_(resolution), directed_(directed) {}

NodeId TemporalNetwork::push_node(std::string_view label, Time birth_time, bool selectable) {
  if (birth_time < 0) throw NetworkError("negative birth time for '" + std::string(label) + "'");
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(NodeRecord{id, std::string(label), birth_time, selectable});
  increments_.emplace_back();
  offsets_.push_back(0);
  if (selectable) ++selectable_count_;
  return id;
}

NodeId TemporalNetwork::add_node(std::string_view label, Time birth_time) {
  if (auto it = by_label_.find(std::string(label)); it != by_label_.end()) {
    auto& rec = nodes_[it->second];
    rec.birth_time = std::min(rec.birth_time, birth_time);
    return it->second;
  }
  const NodeId id = push_node(label, birth_time, true);
  by_label_.emplace(std::string(label), id);
  return id;
}

NodeId TemporalNetwork::add_source_node(std::string_view label, Time birth_time) {
  return push_node(label, birth_time, false);
}

void TemporalNetwork::check_node(NodeId id) const {
  if (id >= nodes_.size()) throw NetworkError("unknown node id " + std::to_string(id));
}

void TemporalNetwork::add_event(Time time, NodeId source, NodeId target) {
  add_event(EdgeEvent{time, source, target, directed_});
}

void TemporalNetwork::add_event(const EdgeEvent& e) {
  check_node(e.source);
  check_node(e.target);
  if (e.directed != directed_) throw NetworkError("event direction does not match network");
  if (e.source == e.target) throw NetworkError("self-loop on node " + std::to_string(e.source));
  if (!events_.empty() && e.time < events_.back().time) {
    throw NetworkError("time regression: event at " + std::to_string(e.time) + " after " +
                       std::to_string(events_.back().time));
  }
  for (NodeId n : {e.source, e.target}) {
    if (nodes_[n].birth_time > e.time) {
      throw NetworkError("node '" + nodes_[n].label + "' used before its birth time");
    }
  }
  events_.push_back(e);
  increments_[e.target].push_back(e.time);
  if (!directed_) increments_[e.source].push_back(e.time);
}

std::int64_t TemporalNetwork::degree_at(NodeId node, Time t) const {
  check_node(node);
  const auto& inc = increments_[node];
  const auto before = std::lower_bound(inc.begin(), inc.end(), t) - inc.begin();
  return offsets_[node] + before;
}

std::vector<NodeId> TemporalNetwork::active_nodes(Time t) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.selectable && n.birth_time <= t) out.push_back(n.id);
  }
  return out;
}

std::size_t TemporalNetwork::active_count(Time t) const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [t](const NodeRecord& n) {
    return n.selectable && n.birth_time <= t;
  }));
}

std::vector<NodeId> TemporalNetwork::population() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (!n.selectable) continue;
    if (window_ && n.birth_time > window_->end) continue;
    out.push_back(n.id);
  }
  return out;
}

TemporalNetwork TemporalNetwork::slice_period(Time t_start, Time t_end, bool carry_degrees) const {
  if (t_start > t_end) throw NetworkError("slice start after slice end");
  TemporalNetwork out(resolution_, directed_);
  out.origin_year_ = origin_year_;
  out.window_ = Window{t_start, t_end};
  out.nodes_ = nodes_;
  out.by_label_ = by_label_;
  out.selectable_count_ = selectable_count_;
  out.increments_.resize(nodes_.size());
  out.offsets_.assign(nodes_.size(), 0);
  if (carry_degrees) {
    for (NodeId i = 0; i < nodes_.size(); ++i) out.offsets_[i] = degree_at(i, t_start);
  }
  for (const auto& e : events_) {
    if (e.time < t_start || e.time > t_end) continue;
    out.events_.push_back(e);
    out.increments_[e.target].push_back(e.time);
    if (!directed_) out.increments_[e.source].push_back(e.time);
  }
  return out;
}

DegreeTable TemporalNetwork::degree_table(Time t_from, Time t_to) const {
  DegreeTable table;
  table.t_from = t_from;
  if (t_to < t_from) return table;
  table.rows.resize(static_cast<std::size_t>(t_to - t_from + 1));
  for (const auto& n : nodes_) {
    if (!n.selectable) continue;
    for (Time t = std::max(t_from, n.birth_time); t <= t_to; ++t) {
      const auto k = static_cast<std::size_t>(degree_at(n.id, t));
      auto& row = table.rows[static_cast<std::size_t>(t - t_from)];
      if (row.size() <= k) row.resize(k + 1, 0);
      ++row[k];
    }
  }
  return table;
}

std::optional<NodeId> TemporalNetwork::find(std::string_view label) const {
  if (auto it = by_label_.find(std::string(label)); it != by_label_.end()) return it->second;
  return std::nullopt;
}

const NodeRecord& TemporalNetwork::node(NodeId id) const {
  check_node(id);
  return nodes_[id];
}

std::int64_t TemporalNetwork::initial_degree(NodeId node) const {
  check_node(node);
  return offsets_[node];
}

void TemporalNetwork::set_initial_degree(NodeId node, std::int64_t degree) {
  check_node(node);
  if (degree < 0) throw NetworkError("negative initial degree");
  offsets_[node] = degree;
}

const std::vector<Time>& TemporalNetwork::increment_times(NodeId node) const {
  check_node(node);
  return increments_[node];
}

Time TemporalNetwork::first_time() const {
  Time t = events_.empty() ? 0 : events_.front().time;
  bool any = !events_.empty();
  for (const auto& n : nodes_) {
    t = any ? std::min(t, n.birth_time) : n.birth_time;
    any = true;
  }
  if (window_) t = std::max(t, window_->start);
  return t;
}

Time TemporalNetwork::last_time() const {
  Time t = events_.empty() ? 0 : events_.back().time;
  for (const auto& n : nodes_) t = std::max(t, n.birth_time);
  if (window_) t = std::min(std::max(t, window_->start), window_->end);
  return t;
}

std::int64_t TemporalNetwork::max_degree() const {
  std::int64_t k = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    k = std::max<std::int64_t>(k, offsets_[i] + static_cast<std::int64_t>(increments_[i].size()));
  }
  return k;
}

}  // namespace fitpa
