#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dtvcn/graph.hpp"

namespace dtvcn {

/// A correlation value, or nullopt when the underlying variance is zero
/// (regular graphs, constant betweenness). Never NaN.
using Correlation = std::optional<double>;

/// Which per-node quantity is being correlated. Degrees are correlated via
/// their excess (k - 1); betweenness values are used as they are.
enum class ValueKind { Degree, Betweenness };

/// Mean and variance of the excess value over all 2|E| directed edge ends.
struct EdgeMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Floor applied to +1-shifted contributions inside node_zeta, keeping
/// zeta strictly positive when a contribution clamps to -1.
inline constexpr double kShiftedContributionFloor = 1e-6;

EdgeMoments edge_moments(std::span<const double> values, const GraphSnapshot& g, ValueKind kind);

/// Pearson correlation of excess values across both orientations of every
/// edge. With degrees this is the assortativity coefficient r_deg.
Correlation pearson_r(std::span<const double> values, const GraphSnapshot& g, ValueKind kind);
Correlation degree_assortativity(const GraphSnapshot& g);

/// Standardized product (x_i - mu)(x_n - mu) / sigma^2 for edge (i, n),
/// before clamping. Its mean over directed edges equals pearson_r exactly.
Correlation raw_contribution(std::span<const double> values, const GraphSnapshot& g, NodeId i,
                             NodeId n, ValueKind kind);

/// raw_contribution clamped to [-1, 1]. Throws NotAnEdge.
Correlation pairwise_contribution(std::span<const double> values, const GraphSnapshot& g,
                                  NodeId i, NodeId n, ValueKind kind);

/// min over neighbors of pairwise_contribution; nullopt for isolated nodes
/// or zero variance.
std::vector<Correlation> local_min_contribution(std::span<const double> values,
                                                const GraphSnapshot& g, ValueKind kind);

/// Node disassortativity factor in (0, 1]:
///   (min_n r(i,n) + 1) / sum_n (r(i,n) + 1)
/// with each shifted term floored at kShiftedContributionFloor. Zero
/// variance gives 1/|Ne(i)|. Throws IsolatedNode.
double node_zeta(std::span<const double> values, const GraphSnapshot& g, NodeId i,
                 ValueKind kind);

/// node_zeta for every node (0 for isolated nodes).
std::vector<double> all_zeta(std::span<const double> values, const GraphSnapshot& g,
                             ValueKind kind);

/// Degree-based zeta over a working graph; used once per growth step.
std::vector<double> degree_zeta(const MutableGraph& g);

/// Excess-degree moments of a working graph; nullopt on zero variance or
/// an empty edge set.
std::optional<EdgeMoments> degree_moments(const MutableGraph& g);

/// Average nearest-neighbor degree per degree class, k -> <k_nn>(k).
std::map<std::size_t, double> andn(const GraphSnapshot& g);

struct ExcessDegreeDistribution {
  std::map<std::size_t, double> q;  ///< q_k = (k+1) p_{k+1} / <k>
  double mean_q = 0.0;
  double var_q = 0.0;
};

ExcessDegreeDistribution excess_distribution(const GraphSnapshot& g);

/// Per-node derived quantities. `capacity` is filled by the traffic module.
struct NodeScores {
  std::vector<std::size_t> degree;
  std::vector<double> betweenness;
  std::vector<Correlation> r_local;    ///< degree-based min contribution
  std::vector<double> zeta;            ///< degree-based node_zeta
  std::vector<Correlation> r_g_local;  ///< betweenness-based min contribution
  std::vector<int> capacity;
};

NodeScores compute_node_scores(const GraphSnapshot& g, std::vector<double> betweenness);

std::vector<double> as_values(std::span<const std::size_t> ints);

/// "k,knn_mean"
void write_andn_csv(std::ostream& out, const std::map<std::size_t, double>& knn);
/// "node,degree,betweenness,zeta,r_local"
void write_node_scores_csv(std::ostream& out, const NodeScores& scores);

}  // namespace dtvcn
