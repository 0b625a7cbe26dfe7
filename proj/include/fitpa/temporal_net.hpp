#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fitpa {

using NodeId = std::uint32_t;
/// Discrete time index in units of the network resolution.
using Time = std::int64_t;

enum class Resolution { monthly, yearly, step };

std::string_view to_string(Resolution r);
Resolution parse_resolution(std::string_view s);

struct NodeRecord {
  NodeId id = 0;
  std::string label;
  Time birth_time = 0;
  /// False for citing-record sources: they emit edges but never compete
  /// for them, so they are excluded from active sets and statistics.
  bool selectable = true;
};

struct EdgeEvent {
  Time time = 0;
  NodeId source = 0;
  NodeId target = 0;
  bool directed = false;
};

/// Rows are consecutive times starting at t_from; columns are degrees.
struct DegreeTable {
  Time t_from = 0;
  std::vector<std::vector<std::size_t>> rows;

  std::size_t at(Time t, std::size_t k) const;
};

/// Growing multigraph with node birth times and a time-ordered event stream.
///
/// The model degree is the undirected degree, or the in-degree for directed
/// networks. Construction is append-only; a fully built network is safe to
/// share between readers.
class TemporalNetwork {
 public:
  explicit TemporalNetwork(Resolution resolution = Resolution::step, bool directed = false);

  /// Registers a selectable node. Re-adding an existing label returns the
  /// existing id and keeps the earlier of the two birth times.
  NodeId add_node(std::string_view label, Time birth_time);

  /// Registers a non-selectable source node (e.g. one citing record). Labels
  /// of source nodes are not deduplicated.
  NodeId add_source_node(std::string_view label, Time birth_time);

  void add_event(const EdgeEvent& event);
  void add_event(Time time, NodeId source, NodeId target);

  /// Model degree from increments strictly before `t`, plus any carried offset.
  std::int64_t degree_at(NodeId node, Time t) const;

  /// Selectable nodes with birth_time <= t, in id order.
  std::vector<NodeId> active_nodes(Time t) const;
  std::size_t active_count(Time t) const;

  /// Events in [t_start, t_end]. Node ids are kept; the window is recorded
  /// so that consumers can ignore nodes born after t_end. With carry_degrees,
  /// each node enters the slice with the degree it had at t_start.
  TemporalNetwork slice_period(Time t_start, Time t_end, bool carry_degrees = true) const;

  struct Window {
    Time start;
    Time end;
  };
  /// Set on slices; nullopt for a full network.
  std::optional<Window> window() const noexcept { return window_; }

  /// Selectable nodes born no later than the window end (all selectable
  /// nodes for an unsliced network).
  std::vector<NodeId> population() const;

  DegreeTable degree_table(Time t_from, Time t_to) const;

  std::optional<NodeId> find(std::string_view label) const;
  const NodeRecord& node(NodeId id) const;
  const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
  const std::vector<EdgeEvent>& events() const noexcept { return events_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t selectable_count() const noexcept { return selectable_count_; }
  std::size_t event_count() const noexcept { return events_.size(); }

  Resolution resolution() const noexcept { return resolution_; }
  bool directed() const noexcept { return directed_; }

  /// Calendar year of time index 0, when the network came from ingestion.
  std::optional<int> origin_year() const noexcept { return origin_year_; }
  void set_origin_year(std::optional<int> year) { origin_year_ = year; }

  std::int64_t initial_degree(NodeId node) const;
  void set_initial_degree(NodeId node, std::int64_t degree);

  /// Times at which the node's model degree was incremented, ascending.
  const std::vector<Time>& increment_times(NodeId node) const;

  /// Earliest time touched by a node or an event, and the latest.
  Time first_time() const;
  Time last_time() const;

  /// Largest model degree any node reaches.
  std::int64_t max_degree() const;

 private:
  NodeId push_node(std::string_view label, Time birth_time, bool selectable);
  void check_node(NodeId id) const;

  Resolution resolution_;
  bool directed_;
  std::optional<int> origin_year_;
  std::optional<Window> window_;
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeEvent> events_;
  std::vector<std::vector<Time>> increments_;
  std::vector<std::int64_t> offsets_;
  std::unordered_map<std::string, NodeId> by_label_;
  std::size_t selectable_count_ = 0;
};

/// Line-delimited, tab-separated event file:
///   #resolution=<monthly|yearly|step>\tdirected=<0|1>[\torigin=<year>]
///   N\t<id>\t<birth>\t<label>      selectable node
///   S\t<id>\t<birth>\t<label>      source-only node
///   D\t<id>\t<initial degree>      carried degree offset
///   E\t<time>\t<source>\t<target>
/// Further lines starting with '#' are comments.
void write_network(std::ostream& out, const TemporalNetwork& net,
                   const std::vector<std::string>& comments = {});
TemporalNetwork read_network(std::istream& in);

void save_network(const std::string& path, const TemporalNetwork& net,
                  const std::vector<std::string>& comments = {});
TemporalNetwork load_network(const std::string& path);

}  // namespace fitpa
