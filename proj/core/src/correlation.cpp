#include "dtvcn/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "dtvcn/error.hpp"
#include "format.hpp"

namespace dtvcn {

namespace {

double excess(double value, ValueKind kind) {
  return kind == ValueKind::Degree ? value - 1.0 : value;
}

bool negligible_variance(const EdgeMoments& m) {
  return !(m.variance > 1e-12 * std::max(1.0, m.mean * m.mean));
}

template <typename Graph>
EdgeMoments moments_of(std::span<const double> values, const Graph& g, ValueKind kind) {
  const std::size_t n = g.node_count();
  if (values.size() != n) throw Error(ErrorCode::InvalidParams, "value vector size mismatch");
  double ends = 0.0, sum = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const double k = static_cast<double>(g.degree(i));
    ends += k;
    sum += k * excess(values[i], kind);
  }
  if (ends == 0.0) throw Error(ErrorCode::EmptyGraph, "graph has no edges");
  EdgeMoments m;
  m.mean = sum / ends;
  double ss = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const double d = excess(values[i], kind) - m.mean;
    ss += static_cast<double>(g.degree(i)) * d * d;
  }
  m.variance = ss / ends;
  return m;
}

// Shared by snapshot and working-graph callers.
template <typename Graph>
double zeta_of(std::span<const double> values, const Graph& g, NodeId i, ValueKind kind,
               const EdgeMoments& m, bool defined) {
  const auto nbrs = g.neighbors(i);
  if (nbrs.empty()) throw Error(ErrorCode::IsolatedNode, "node " + std::to_string(i));
  if (!defined) return 1.0 / static_cast<double>(nbrs.size());
  const double xi = excess(values[i], kind) - m.mean;
  double lowest = 2.0, total = 0.0;
  for (NodeId n : nbrs) {
    double r = xi * (excess(values[n], kind) - m.mean) / m.variance;
    double shifted = std::max(std::clamp(r, -1.0, 1.0) + 1.0, kShiftedContributionFloor);
    lowest = std::min(lowest, shifted);
    total += shifted;
  }
  return lowest / total;
}

template <typename Graph>
std::vector<double> zeta_all_of(std::span<const double> values, const Graph& g, ValueKind kind) {
  const EdgeMoments m = moments_of(values, g, kind);
  const bool defined = !negligible_variance(m);
  std::vector<double> out(g.node_count(), 0.0);
  for (NodeId i = 0; i < g.node_count(); ++i)
    if (g.degree(i) > 0) out[i] = zeta_of(values, g, i, kind, m, defined);
  return out;
}

}  // namespace

EdgeMoments edge_moments(std::span<const double> values, const GraphSnapshot& g, ValueKind kind) {
  return moments_of(values, g, kind);
}

Correlation pearson_r(std::span<const double> values, const GraphSnapshot& g, ValueKind kind) {
  const EdgeMoments m = moments_of(values, g, kind);
  if (negligible_variance(m)) return std::nullopt;
  double cov = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const double xi = excess(values[i], kind) - m.mean;
    for (NodeId n : g.neighbors(i)) cov += xi * (excess(values[n], kind) - m.mean);
  }
  cov /= 2.0 * static_cast<double>(g.edge_count());
  return std::clamp(cov / m.variance, -1.0, 1.0);
}

Correlation degree_assortativity(const GraphSnapshot& g) {
  const auto k = g.degrees();
  return pearson_r(as_values(k), g, ValueKind::Degree);
}

Correlation raw_contribution(std::span<const double> values, const GraphSnapshot& g, NodeId i,
                             NodeId n, ValueKind kind) {
  if (!g.has_edge(i, n))
    throw Error(ErrorCode::NotAnEdge,
                "(" + std::to_string(i) + "," + std::to_string(n) + ") is not an edge");
  const EdgeMoments m = moments_of(values, g, kind);
  if (negligible_variance(m)) return std::nullopt;
  return (excess(values[i], kind) - m.mean) * (excess(values[n], kind) - m.mean) / m.variance;
}

Correlation pairwise_contribution(std::span<const double> values, const GraphSnapshot& g,
                                  NodeId i, NodeId n, ValueKind kind) {
  auto r = raw_contribution(values, g, i, n, kind);
  if (!r) return r;
  return std::clamp(*r, -1.0, 1.0);
}

std::vector<Correlation> local_min_contribution(std::span<const double> values,
                                                const GraphSnapshot& g, ValueKind kind) {
  std::vector<Correlation> out(g.node_count());
  if (g.edge_count() == 0) return out;
  const EdgeMoments m = moments_of(values, g, kind);
  if (negligible_variance(m)) return out;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    const double xi = excess(values[i], kind) - m.mean;
    double lowest = 1.0;
    for (NodeId n : nbrs)
      lowest = std::min(lowest, std::clamp(xi * (excess(values[n], kind) - m.mean) / m.variance,
                                           -1.0, 1.0));
    out[i] = lowest;
  }
  return out;
}

double node_zeta(std::span<const double> values, const GraphSnapshot& g, NodeId i,
                 ValueKind kind) {
  if (i >= g.node_count()) throw Error(ErrorCode::InvalidNode, "node " + std::to_string(i));
  if (g.degree(i) == 0) throw Error(ErrorCode::IsolatedNode, "node " + std::to_string(i));
  const EdgeMoments m = moments_of(values, g, kind);
  return zeta_of(values, g, i, kind, m, !negligible_variance(m));
}

std::vector<double> all_zeta(std::span<const double> values, const GraphSnapshot& g,
                             ValueKind kind) {
  return zeta_all_of(values, g, kind);
}

std::vector<double> degree_zeta(const MutableGraph& g) {
  std::vector<double> k(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) k[i] = static_cast<double>(g.degree(i));
  return zeta_all_of(std::span<const double>(k), g, ValueKind::Degree);
}

std::optional<EdgeMoments> degree_moments(const MutableGraph& g) {
  if (g.edge_count() == 0) return std::nullopt;
  std::vector<double> k(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) k[i] = static_cast<double>(g.degree(i));
  const EdgeMoments m = moments_of(std::span<const double>(k), g, ValueKind::Degree);
  if (negligible_variance(m)) return std::nullopt;
  return m;
}

std::map<std::size_t, double> andn(const GraphSnapshot& g) {
  if (g.node_count() == 0) throw Error(ErrorCode::EmptyGraph, "no nodes");
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    double s = 0.0;
    for (NodeId n : nbrs) s += static_cast<double>(g.degree(n));
    auto& slot = acc[nbrs.size()];
    slot.first += s / static_cast<double>(nbrs.size());
    slot.second += 1;
  }
  std::map<std::size_t, double> out;
  for (const auto& [k, v] : acc) out[k] = v.first / static_cast<double>(v.second);
  return out;
}

ExcessDegreeDistribution excess_distribution(const GraphSnapshot& g) {
  const std::size_t n = g.node_count();
  if (n == 0 || g.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "<k> = 0");
  std::map<std::size_t, std::size_t> count;
  for (NodeId i = 0; i < n; ++i) ++count[g.degree(i)];
  const double mean_k = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);

  ExcessDegreeDistribution d;
  for (const auto& [k, c] : count) {
    if (k == 0) continue;
    const double pk = static_cast<double>(c) / static_cast<double>(n);
    d.q[k - 1] = static_cast<double>(k) * pk / mean_k;
  }
  double m1 = 0.0, m2 = 0.0;
  for (const auto& [k, q] : d.q) {
    m1 += static_cast<double>(k) * q;
    m2 += static_cast<double>(k * k) * q;
  }
  d.mean_q = m1;
  d.var_q = std::max(0.0, m2 - m1 * m1);
  return d;
}

std::vector<double> as_values(std::span<const std::size_t> ints) {
  return std::vector<double>(ints.begin(), ints.end());
}

NodeScores compute_node_scores(const GraphSnapshot& g, std::vector<double> betweenness) {
  NodeScores s;
  s.degree = g.degrees();
  s.betweenness = std::move(betweenness);
  const auto k = as_values(s.degree);
  s.r_local = local_min_contribution(k, g, ValueKind::Degree);
  s.zeta = g.edge_count() ? all_zeta(k, g, ValueKind::Degree)
                          : std::vector<double>(g.node_count(), 0.0);
  s.r_g_local = local_min_contribution(s.betweenness, g, ValueKind::Betweenness);
  return s;
}

void write_andn_csv(std::ostream& out, const std::map<std::size_t, double>& knn) {
  out << "k,knn_mean\n";
  for (const auto& [k, v] : knn) out << k << ',' << detail::fmt(v) << '\n';
}

void write_node_scores_csv(std::ostream& out, const NodeScores& scores) {
  out << "node,degree,betweenness,zeta,r_local\n";
  for (std::size_t i = 0; i < scores.degree.size(); ++i) {
    out << i << ',' << scores.degree[i] << ',' << detail::fmt(scores.betweenness[i]) << ','
        << detail::fmt(scores.zeta[i]) << ',' << detail::fmt(scores.r_local[i]) << '\n';
  }
}

}  // namespace dtvcn
