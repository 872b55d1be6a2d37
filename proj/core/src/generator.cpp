#include "dtvcn/generator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include "dtvcn/correlation.hpp"
#include "dtvcn/error.hpp"
#include "dtvcn/random.hpp"

namespace dtvcn {

std::string_view to_string(GrowthModel m) noexcept {
  switch (m) {
    case GrowthModel::BA: return "BA";
    case GrowthModel::TVCN: return "TVCN";
    case GrowthModel::DTVCN: return "DTVCN";
  }
  return "?";
}

GrowthModel parse_growth_model(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "BA") return GrowthModel::BA;
  if (s == "TVCN") return GrowthModel::TVCN;
  if (s == "DTVCN") return GrowthModel::DTVCN;
  throw Error(ErrorCode::InvalidParams, "unknown model '" + std::string(name) + "'");
}

void GrowthParams::validate() const {
  auto bad = [](const char* field, const std::string& why) {
    throw Error(ErrorCode::InvalidParams, std::string(field) + ": " + why);
  };
  if (n0 < 2) bad("n0", "must be >= 2");
  if (T < 0) bad("T", "must be >= 0");
  if (M < 1) bad("M", "must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) bad("beta", "must lie in (0,1)");
  if (!(gamma > 0.5 && gamma < 1.0)) bad("gamma", "must lie in (0.5,1)");
}

LinkBudget GrowthParams::budget() const {
  const double m = static_cast<double>(M);
  LinkBudget b;
  b.add = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(beta * m)));
  if (model != GrowthModel::BA) {
    b.rewire = static_cast<std::size_t>(std::lround(gamma * (1.0 - beta) * m));
    b.remove = static_cast<std::size_t>(std::lround((1.0 - gamma) * (1.0 - beta) * m));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Snapshot-level probabilities

namespace {

double zeta_or_uniform(std::span<const double> zeta, NodeId i, std::size_t degree) {
  if (i < zeta.size() && zeta[i] > 0.0) return zeta[i];
  return degree > 0 ? 1.0 / static_cast<double>(degree) : 0.0;
}

double normalized(const SamplingWeights& w, NodeId node) {
  if (node >= w.weight.size()) throw Error(ErrorCode::InvalidNode, "node " + std::to_string(node));
  double total = 0.0;
  for (double x : w.weight) total += x;
  return w.weight[node] / total;
}

}  // namespace

SamplingWeights attach_weights(const GraphSnapshot& g, std::span<const double> zeta,
                               GrowthModel model) {
  if (g.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "sum of degrees is 0");
  SamplingWeights w;
  w.weight.resize(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto k = g.degree(i);
    double x = static_cast<double>(k);
    if (model == GrowthModel::DTVCN) x *= 1.0 + zeta_or_uniform(zeta, i, k);
    w.weight[i] = x;
  }
  return w;
}

SamplingWeights antipref_weights(const GraphSnapshot& g, std::span<const double> zeta,
                                 GrowthModel model) {
  if (g.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "sum of degrees is 0");
  const double total = 2.0 * static_cast<double>(g.edge_count());
  SamplingWeights w;
  w.weight.resize(g.node_count(), 0.0);
  double sum = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto k = g.degree(i);
    if (k == 0) continue;
    double x = 1.0 - static_cast<double>(k) / total;
    if (model == GrowthModel::DTVCN) x *= 1.0 - zeta_or_uniform(zeta, i, k);
    w.weight[i] = x;
    sum += x;
  }
  if (sum <= 0.0) {
    w.uniform_fallback = true;
    for (NodeId i = 0; i < g.node_count(); ++i) w.weight[i] = g.degree(i) > 0 ? 1.0 : 0.0;
  }
  return w;
}

double attach_probability(const GraphSnapshot& g, std::span<const double> zeta, NodeId node,
                          GrowthModel model) {
  return normalized(attach_weights(g, zeta, model), node);
}

double antipref_probability(const GraphSnapshot& g, std::span<const double> zeta, NodeId node,
                            GrowthModel model) {
  return normalized(antipref_weights(g, zeta, model), node);
}

// ---------------------------------------------------------------------------
// Growth

namespace {

constexpr int kGuardRetries = 3;

class Grower {
public:
  explicit Grower(const GrowthParams& p)
      : params_(p), budget_(p.budget()), rng_(p.rng_seed), g_(complete_graph(p.n0)) {
    result_.log.n0 = p.n0;
    result_.log.rng_seed = p.rng_seed;
  }

  GrowthResult run() {
    for (TimeStep t = 1; t <= params_.T; ++t) step(t);
    result_.final_graph = g_.snapshot(params_.T);
    return std::move(result_);
  }

private:
  bool conditioned() const { return params_.model == GrowthModel::DTVCN; }

  double zeta_at(NodeId i) const {
    return zeta_or_uniform(zeta_, i, g_.degree(i));
  }

  double attach_weight(NodeId i) const {
    double x = static_cast<double>(g_.degree(i));
    return conditioned() ? x * (1.0 + zeta_at(i)) : x;
  }

  double antipref_weight(NodeId i) const {
    const auto k = g_.degree(i);
    if (k == 0) return 0.0;
    double x = 1.0 - static_cast<double>(k) / (2.0 * static_cast<double>(g_.edge_count()));
    return conditioned() ? x * (1.0 - zeta_at(i)) : x;
  }

  // Linear-scan roulette over [0, n) with the given weight; nullopt when
  // every weight is zero.
  template <typename WeightFn>
  std::optional<NodeId> draw(std::size_t n, WeightFn&& weight) {
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) total += weight(i);
    if (!(total > 0.0)) return std::nullopt;
    const double target = rng_.uniform() * total;
    double acc = 0.0;
    std::optional<NodeId> last;
    for (NodeId i = 0; i < n; ++i) {
      const double w = weight(i);
      if (w <= 0.0) continue;
      acc += w;
      last = i;
      if (target < acc) return i;
    }
    return last;  // rounding at the top end
  }

  std::optional<NodeId> draw_antipref() {
    const std::size_t n = g_.node_count();
    if (auto u = draw(n, [&](NodeId i) { return antipref_weight(i); })) return u;
    if (g_.edge_count() == 0) return std::nullopt;
    degenerate_antipref_ = true;
    return draw(n, [&](NodeId i) { return g_.degree(i) > 0 ? 1.0 : 0.0; });
  }

  void emit(const EdgeEvent& e) {
    g_.apply(e);
    result_.log.events.push_back(e);
  }

  void step(TimeStep t) {
    if (conditioned()) zeta_ = degree_zeta(g_);
    moments_ = degree_moments(g_);
    degenerate_antipref_ = false;

    StepTrace row;
    row.t = t;
    add_node(t, row);
    for (std::size_t r = 0; r < budget_.rewire; ++r) rewire(t, row);
    for (std::size_t d = 0; d < budget_.remove; ++d) remove(t, row);

    if (degenerate_antipref_)
      result_.warnings.push_back("t=" + std::to_string(t) +
                                 ": anti-preferential weights all zero, sampled uniformly");
    row.nodes = g_.node_count();
    row.edges = g_.edge_count();
    result_.trace.push_back(row);
  }

  void add_node(TimeStep t, StepTrace& row) {
    const std::size_t n = g_.node_count();
    std::vector<char> taken(n, 0);
    std::vector<NodeId> targets;
    for (std::size_t x = 0; x < budget_.add; ++x) {
      auto pick = draw(n, [&](NodeId i) { return taken[i] ? 0.0 : attach_weight(i); });
      if (!pick) {
        result_.warnings.push_back("t=" + std::to_string(t) + ": ExhaustedCandidates, only " +
                                   std::to_string(targets.size()) + " of " +
                                   std::to_string(budget_.add) + " targets available");
        break;
      }
      taken[*pick] = 1;
      targets.push_back(*pick);
    }
    const auto fresh = static_cast<NodeId>(n);
    for (NodeId target : targets) emit({t, EventKind::Add, target, fresh, std::nullopt});
    row.adds = targets.size();
  }

  void rewire(TimeStep t, StepTrace& row) {
    for (int attempt = 0; attempt <= kGuardRetries; ++attempt) {
      auto u = draw_antipref();
      if (!u) break;
      const auto nbrs = g_.neighbors(*u);
      const NodeId v = nbrs[rng_.below(nbrs.size())];
      if (is_bridge(g_, {*u, v})) continue;
      auto w = draw(g_.node_count(), [&](NodeId i) {
        return (i == v || g_.has_edge(v, i)) ? 0.0 : attach_weight(i);
      });
      if (!w) continue;
      emit({t, EventKind::Rewire, v, *w, *u});
      ++row.rewires;
      return;
    }
    ++row.skipped_rewires;
  }

  // Neighbor of u with the largest clamped degree contribution; smallest id on ties.
  NodeId most_correlated_neighbor(NodeId u) const {
    const auto nbrs = g_.neighbors(u);
    if (!moments_) return nbrs.front();
    const double xu = static_cast<double>(g_.degree(u)) - 1.0 - moments_->mean;
    NodeId best = nbrs.front();
    double best_r = -2.0;
    for (NodeId n : nbrs) {
      const double xn = static_cast<double>(g_.degree(n)) - 1.0 - moments_->mean;
      const double r = std::clamp(xu * xn / moments_->variance, -1.0, 1.0);
      if (r > best_r) {
        best_r = r;
        best = n;
      }
    }
    return best;
  }

  void remove(TimeStep t, StepTrace& row) {
    for (int attempt = 0; attempt <= kGuardRetries; ++attempt) {
      auto u = draw_antipref();
      if (!u) break;
      const NodeId n = most_correlated_neighbor(*u);
      if (is_bridge(g_, {*u, n})) continue;
      emit({t, EventKind::Delete, *u, n, std::nullopt});
      ++row.deletes;
      return;
    }
    ++row.skipped_deletes;
  }

  GrowthParams params_;
  LinkBudget budget_;
  Rng rng_;
  MutableGraph g_;
  std::vector<double> zeta_;
  std::optional<EdgeMoments> moments_;
  bool degenerate_antipref_ = false;
  GrowthResult result_;
};

}  // namespace

GrowthResult grow(const GrowthParams& params) {
  params.validate();
  return Grower(params).run();
}

void write_growth_trace_csv(std::ostream& out, std::span<const StepTrace> trace) {
  out << "t,nodes,edges,f_add,f_rewire,f_delete,skipped_deletes\n";
  for (const StepTrace& r : trace)
    out << r.t << ',' << r.nodes << ',' << r.edges << ',' << r.adds << ',' << r.rewires << ','
        << r.deletes << ',' << r.skipped_deletes << '\n';
}

}  // namespace dtvcn
