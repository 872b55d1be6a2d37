#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dtvcn {

using NodeId = std::uint32_t;
using TimeStep = std::int64_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  /// Same edge with u < v.
  Edge canonical() const noexcept { return u < v ? Edge{u, v} : Edge{v, u}; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class EventKind { Add, Rewire, Delete };

/// One change to the edge set.
///
/// Add and Delete touch edge (u, v). Rewire replaces edge (u, old_v) with
/// (u, v): u keeps its link, old_v loses it, v gains it. An Add whose larger
/// endpoint equals the current node count introduces that node.
struct EdgeEvent {
  TimeStep time = 0;
  EventKind kind = EventKind::Add;
  NodeId u = 0;
  NodeId v = 0;
  std::optional<NodeId> old_v;

  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

class MutableGraph;

/// Immutable undirected simple graph at one time step.
///
/// Neighbor lists are sorted ascending, so iteration order is deterministic
/// and membership is a binary search.
class GraphSnapshot {
public:
  GraphSnapshot() = default;

  /// Builds a snapshot from an edge list. Throws on self-loops, duplicate
  /// edges or out-of-range endpoints.
  static GraphSnapshot from_edges(std::size_t node_count, std::span<const Edge> edges,
                                  TimeStep timestamp = 0);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  TimeStep timestamp() const noexcept { return timestamp_; }

  std::span<const NodeId> neighbors(NodeId i) const { return adjacency_.at(i); }
  std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }
  std::vector<std::size_t> degrees() const;
  bool has_edge(NodeId a, NodeId b) const;

  /// All edges with u < v, sorted.
  std::vector<Edge> edges() const;

  friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;

private:
  friend class MutableGraph;

  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
  TimeStep timestamp_ = 0;
};

/// Private working copy used while growing or replaying a network.
class MutableGraph {
public:
  MutableGraph() = default;
  explicit MutableGraph(std::size_t node_count) : adjacency_(node_count) {}
  explicit MutableGraph(const GraphSnapshot& snapshot);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::span<const NodeId> neighbors(NodeId i) const { return adjacency_[i]; }
  std::size_t degree(NodeId i) const { return adjacency_[i].size(); }
  bool has_edge(NodeId a, NodeId b) const;

  NodeId add_node();
  void add_edge(NodeId a, NodeId b);
  void remove_edge(NodeId a, NodeId b);

  /// Applies one event, validating it first. The graph is unchanged on error.
  void apply(const EdgeEvent& event);

  GraphSnapshot snapshot(TimeStep timestamp) const;

private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Seed descriptor plus the time-ordered event stream that grows it.
/// The seed network is the complete graph on n0 nodes.
struct EventLog {
  std::size_t n0 = 0;
  std::uint64_t rng_seed = 0;
  std::vector<EdgeEvent> events;

  TimeStep last_time() const noexcept { return events.empty() ? 0 : events.back().time; }
  std::size_t final_nodes() const;

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

GraphSnapshot complete_graph(std::size_t n);

GraphSnapshot apply_event(const GraphSnapshot& snapshot, const EdgeEvent& event);

/// Snapshot after every event with time <= until. Throws TimeOutOfRange
/// when until is negative or beyond the last event.
GraphSnapshot replay(const EventLog& log, TimeStep until);

/// Time step at which each node appeared (0 for seed nodes).
std::vector<TimeStep> arrival_times(const EventLog& log);

bool is_connected(const GraphSnapshot& g);

/// True iff g without `edge` is still a single component over all nodes.
bool connected_after_removal(const GraphSnapshot& g, Edge edge);

/// True iff removing `edge` separates its endpoints.
bool is_bridge(const MutableGraph& g, Edge edge);

/// Component index of every node; components are numbered in order of
/// their smallest node id.
std::vector<std::size_t> component_labels(const GraphSnapshot& g, std::size_t* count = nullptr);

/// One "u v" line per edge, u < v.
void write_edge_list(std::ostream& out, const GraphSnapshot& g);

// Small fixtures shared by tests, benchmarks and docs.
GraphSnapshot path_graph(std::size_t n);
GraphSnapshot cycle_graph(std::size_t n);
GraphSnapshot star_graph(std::size_t n);  // node 0 is the center

}  // namespace dtvcn
