#include "dtvcn/graph.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <string>

#include "dtvcn/error.hpp"

namespace dtvcn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::MissingEdge: return "MissingEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::NotAnEdge: return "NotAnEdge";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::TooFewRichNodes: return "TooFewRichNodes";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NotPowerLaw: return "NotPowerLaw";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::NoFixedPointFound: return "NoFixedPointFound";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::TooFewModels: return "TooFewModels";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Parse: return "ParseError";
  }
  return "Unknown";
}

namespace {

bool sorted_contains(const std::vector<NodeId>& list, NodeId x) {
  return std::binary_search(list.begin(), list.end(), x);
}

void sorted_insert(std::vector<NodeId>& list, NodeId x) {
  list.insert(std::lower_bound(list.begin(), list.end(), x), x);
}

void sorted_erase(std::vector<NodeId>& list, NodeId x) {
  auto it = std::lower_bound(list.begin(), list.end(), x);
  list.erase(it);
}

std::string describe(const EdgeEvent& e) {
  std::string kind = e.kind == EventKind::Add      ? "add"
                     : e.kind == EventKind::Rewire ? "rewire"
                                                   : "delete";
  std::string s = kind + "(t=" + std::to_string(e.time) + ", u=" + std::to_string(e.u) +
                  ", v=" + std::to_string(e.v);
  if (e.old_v) s += ", old_v=" + std::to_string(*e.old_v);
  return s + ")";
}

template <typename AdjacencyFn>
std::vector<std::size_t> label_components(std::size_t n, AdjacencyFn&& adj, std::size_t* count) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, unset);
  std::size_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      for (NodeId y : adj(x)) {
        if (label[y] == unset) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

}  // namespace

// ---------------------------------------------------------------------------
// GraphSnapshot

GraphSnapshot GraphSnapshot::from_edges(std::size_t node_count, std::span<const Edge> edges,
                                        TimeStep timestamp) {
  MutableGraph g(node_count);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw Error(ErrorCode::InvalidNode, "edge endpoint out of range");
    g.add_edge(e.u, e.v);
  }
  return g.snapshot(timestamp);
}

std::vector<std::size_t> GraphSnapshot::degrees() const {
  std::vector<std::size_t> out(adjacency_.size());
  for (std::size_t i = 0; i < adjacency_.size(); ++i) out[i] = adjacency_[i].size();
  return out;
}

bool GraphSnapshot::has_edge(NodeId a, NodeId b) const {
  if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
  return sorted_contains(adjacency_[a], b);
}

std::vector<Edge> GraphSnapshot::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u)
    for (NodeId v : adjacency_[u])
      if (u < v) out.push_back({u, v});
  return out;
}

// ---------------------------------------------------------------------------
// MutableGraph

MutableGraph::MutableGraph(const GraphSnapshot& snapshot)
    : adjacency_(snapshot.adjacency_), edge_count_(snapshot.edge_count_) {}

bool MutableGraph::has_edge(NodeId a, NodeId b) const {
  if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
  return sorted_contains(adjacency_[a], b);
}

NodeId MutableGraph::add_node() {
  adjacency_.emplace_back();
  return static_cast<NodeId>(adjacency_.size() - 1);
}

void MutableGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(a));
  if (a >= adjacency_.size() || b >= adjacency_.size())
    throw Error(ErrorCode::InvalidNode, "edge endpoint out of range");
  if (has_edge(a, b))
    throw Error(ErrorCode::DuplicateEdge,
                "edge (" + std::to_string(a) + "," + std::to_string(b) + ") exists");
  sorted_insert(adjacency_[a], b);
  sorted_insert(adjacency_[b], a);
  ++edge_count_;
}

void MutableGraph::remove_edge(NodeId a, NodeId b) {
  if (!has_edge(a, b))
    throw Error(ErrorCode::MissingEdge,
                "edge (" + std::to_string(a) + "," + std::to_string(b) + ") absent");
  sorted_erase(adjacency_[a], b);
  sorted_erase(adjacency_[b], a);
  --edge_count_;
}

void MutableGraph::apply(const EdgeEvent& event) {
  const std::size_t n = adjacency_.size();
  auto fail = [&](ErrorCode code, const char* why) {
    throw Error(code, std::string(why) + " in event " + describe(event));
  };

  switch (event.kind) {
    case EventKind::Add: {
      if (event.u == event.v) fail(ErrorCode::SelfLoop, "self-loop");
      const NodeId hi = std::max(event.u, event.v);
      const NodeId lo = std::min(event.u, event.v);
      if (lo >= n || hi > n) fail(ErrorCode::InvalidNode, "unknown node");
      if (hi == n) {
        add_node();
      } else if (has_edge(event.u, event.v)) {
        fail(ErrorCode::DuplicateEdge, "duplicate edge");
      }
      add_edge(event.u, event.v);
      break;
    }
    case EventKind::Delete: {
      if (event.u == event.v) fail(ErrorCode::SelfLoop, "self-loop");
      if (event.u >= n || event.v >= n) fail(ErrorCode::InvalidNode, "unknown node");
      if (!has_edge(event.u, event.v)) fail(ErrorCode::MissingEdge, "missing edge");
      remove_edge(event.u, event.v);
      break;
    }
    case EventKind::Rewire: {
      if (!event.old_v) fail(ErrorCode::InvalidParams, "rewire without old endpoint");
      const NodeId old_v = *event.old_v;
      if (event.u >= n || event.v >= n || old_v >= n) fail(ErrorCode::InvalidNode, "unknown node");
      if (event.u == event.v) fail(ErrorCode::SelfLoop, "self-loop");
      if (!has_edge(event.u, old_v)) fail(ErrorCode::MissingEdge, "missing edge");
      if (event.v != old_v && has_edge(event.u, event.v))
        fail(ErrorCode::DuplicateEdge, "duplicate edge");
      remove_edge(event.u, old_v);
      add_edge(event.u, event.v);
      break;
    }
  }
}

GraphSnapshot MutableGraph::snapshot(TimeStep timestamp) const {
  GraphSnapshot s;
  s.adjacency_ = adjacency_;
  s.edge_count_ = edge_count_;
  s.timestamp_ = timestamp;
  return s;
}

// ---------------------------------------------------------------------------
// Event logs

std::size_t EventLog::final_nodes() const {
  std::size_t n = n0;
  for (const EdgeEvent& e : events)
    if (e.kind == EventKind::Add && std::max(e.u, e.v) == n) ++n;
  return n;
}

GraphSnapshot complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return GraphSnapshot::from_edges(n, edges);
}

GraphSnapshot apply_event(const GraphSnapshot& snapshot, const EdgeEvent& event) {
  MutableGraph g(snapshot);
  g.apply(event);
  return g.snapshot(event.time);
}

GraphSnapshot replay(const EventLog& log, TimeStep until) {
  if (until < 0 || until > log.last_time())
    throw Error(ErrorCode::TimeOutOfRange, "replay time " + std::to_string(until) +
                                               " outside [0, " +
                                               std::to_string(log.last_time()) + "]");
  MutableGraph g(complete_graph(log.n0));
  TimeStep previous = 0;
  for (const EdgeEvent& e : log.events) {
    if (e.time < previous)
      throw Error(ErrorCode::TimeOutOfRange, "events out of order at " + describe(e));
    previous = e.time;
    if (e.time > until) break;
    g.apply(e);
  }
  return g.snapshot(until);
}

std::vector<TimeStep> arrival_times(const EventLog& log) {
  std::vector<TimeStep> t(log.n0, 0);
  for (const EdgeEvent& e : log.events)
    if (e.kind == EventKind::Add && std::max(e.u, e.v) == t.size()) t.push_back(e.time);
  return t;
}

// ---------------------------------------------------------------------------
// Connectivity

std::vector<std::size_t> component_labels(const GraphSnapshot& g, std::size_t* count) {
  return label_components(
      g.node_count(), [&](NodeId x) { return g.neighbors(x); }, count);
}

bool is_connected(const GraphSnapshot& g) {
  std::size_t count = 0;
  component_labels(g, &count);
  return count <= 1;
}

bool connected_after_removal(const GraphSnapshot& g, Edge edge) {
  if (!g.has_edge(edge.u, edge.v))
    throw Error(ErrorCode::MissingEdge, "edge (" + std::to_string(edge.u) + "," +
                                            std::to_string(edge.v) + ") absent");
  const Edge skip = edge.canonical();
  std::size_t count = 0;
  label_components(
      g.node_count(),
      [&](NodeId x) {
        std::vector<NodeId> out;
        for (NodeId y : g.neighbors(x))
          if (Edge{x, y}.canonical() != skip) out.push_back(y);
        return out;
      },
      &count);
  return count == 1;
}

bool is_bridge(const MutableGraph& g, Edge edge) {
  if (!g.has_edge(edge.u, edge.v))
    throw Error(ErrorCode::MissingEdge, "edge (" + std::to_string(edge.u) + "," +
                                            std::to_string(edge.v) + ") absent");
  if (g.degree(edge.u) == 1 || g.degree(edge.v) == 1) return true;

  // Bidirectional search from both endpoints; stops as soon as the fronts meet.
  const std::size_t n = g.node_count();
  std::vector<std::uint8_t> side(n, 0);
  std::queue<NodeId> qa, qb;
  side[edge.u] = 1;
  side[edge.v] = 2;
  qa.push(edge.u);
  qb.push(edge.v);
  auto expand = [&](std::queue<NodeId>& q, std::uint8_t mine) {
    const std::size_t level = q.size();
    for (std::size_t k = 0; k < level; ++k) {
      NodeId x = q.front();
      q.pop();
      for (NodeId y : g.neighbors(x)) {
        if ((x == edge.u && y == edge.v) || (x == edge.v && y == edge.u)) continue;
        if (side[y] == 0) {
          side[y] = mine;
          q.push(y);
        } else if (side[y] != mine) {
          return true;
        }
      }
    }
    return false;
  };
  while (!qa.empty() && !qb.empty()) {
    if (qa.size() <= qb.size()) {
      if (expand(qa, 1)) return false;
    } else {
      if (expand(qb, 2)) return false;
    }
  }
  return true;
}

void write_edge_list(std::ostream& out, const GraphSnapshot& g) {
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

GraphSnapshot path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return GraphSnapshot::from_edges(n, edges);
}

GraphSnapshot cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  if (n > 2) edges.push_back({static_cast<NodeId>(n - 1), 0});
  return GraphSnapshot::from_edges(n, edges);
}

GraphSnapshot star_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 1; i < n; ++i) edges.push_back({0, i});
  return GraphSnapshot::from_edges(n, edges);
}

}  // namespace dtvcn
