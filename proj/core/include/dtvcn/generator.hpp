#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtvcn/graph.hpp"

namespace dtvcn {

/// BA: preferential additions only. TVCN: additions, rewires and deletions
/// on plain degree weights. DTVCN: the same events with attachment weighted
/// by k_i (1 + zeta_i) and removal by (1 - k_i/sum k)(1 - zeta_i).
enum class GrowthModel { BA, TVCN, DTVCN };

std::string_view to_string(GrowthModel m) noexcept;
GrowthModel parse_growth_model(std::string_view name);

struct LinkBudget {
  std::size_t add = 0;
  std::size_t rewire = 0;
  std::size_t remove = 0;
};

struct GrowthParams {
  std::size_t n0 = 5;
  TimeStep T = 0;
  std::size_t M = 3;
  double beta = 0.6;
  double gamma = 0.6;
  GrowthModel model = GrowthModel::DTVCN;
  std::uint64_t rng_seed = 1;

  /// Throws InvalidParams naming the offending field.
  void validate() const;

  /// add = max(1, round(beta M)); rewire = round(gamma (1-beta) M);
  /// remove = round((1-gamma)(1-beta) M). BA keeps only the additions.
  LinkBudget budget() const;
};

/// Sampling weights over candidate nodes, plus whether the uniform
/// fallback kicked in because every weight was zero.
struct SamplingWeights {
  std::vector<double> weight;
  bool uniform_fallback = false;
};

/// Preferential weights k_i (times 1 + zeta_i for DTVCN). `zeta` may be
/// empty for BA/TVCN. Throws EmptyGraph when sum k = 0.
SamplingWeights attach_weights(const GraphSnapshot& g, std::span<const double> zeta,
                               GrowthModel model);

/// Anti-preferential weights (1 - k_i / sum k) (times 1 - zeta_i for DTVCN)
/// over nodes with at least one link.
SamplingWeights antipref_weights(const GraphSnapshot& g, std::span<const double> zeta,
                                 GrowthModel model);

double attach_probability(const GraphSnapshot& g, std::span<const double> zeta, NodeId node,
                          GrowthModel model);
double antipref_probability(const GraphSnapshot& g, std::span<const double> zeta, NodeId node,
                            GrowthModel model);

/// Per-step counters written to the growth trace.
struct StepTrace {
  TimeStep t = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t adds = 0;
  std::size_t rewires = 0;
  std::size_t deletes = 0;
  std::size_t skipped_deletes = 0;
  std::size_t skipped_rewires = 0;
};

struct GrowthResult {
  EventLog log;
  GraphSnapshot final_graph;
  std::vector<StepTrace> trace;
  std::vector<std::string> warnings;
};

/// Grows a network from K_{n0} for T steps. Deterministic in rng_seed.
///
/// Each step adds one node with `add` preferential links (sampled without
/// replacement), then performs `rewire` rewires and `remove` deletions.
/// A rewire picks u anti-preferentially, drops a uniform incident edge
/// (u, v) and reattaches v preferentially. A deletion drops the edge from an
/// anti-preferentially chosen u to its most correlated neighbor. Neither is
/// allowed to disconnect the network: a bridge is retried up to three times
/// and then skipped.
GrowthResult grow(const GrowthParams& params);

/// "t,nodes,edges,f_add,f_rewire,f_delete,skipped_deletes"
void write_growth_trace_csv(std::ostream& out, std::span<const StepTrace> trace);

}  // namespace dtvcn
