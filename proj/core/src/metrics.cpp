#include "dtvcn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "dtvcn/error.hpp"
#include "dtvcn/parallel.hpp"
#include "format.hpp"

namespace dtvcn {

namespace {

constexpr std::size_t kSourceBlocks = 64;
constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// Accumulates dependencies from one source (Brandes).
struct BrandesWorkspace {
  std::vector<NodeId> order;
  std::vector<std::uint32_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;

  explicit BrandesWorkspace(std::size_t n) : dist(n), sigma(n), delta(n) { order.reserve(n); }

  void run(const GraphSnapshot& g, NodeId s, std::vector<double>& acc) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();

    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (std::size_t idx = order.size(); idx-- > 1;) {
      const NodeId w = order[idx];
      const double coeff = (1.0 + delta[w]) / sigma[w];
      for (NodeId v : g.neighbors(w))
        if (dist[v] + 1 == dist[w]) delta[v] += sigma[v] * coeff;
      acc[w] += delta[w];
    }
  }
};

}  // namespace

std::vector<double> betweenness(const GraphSnapshot& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "no nodes");
  const std::size_t blocks = std::min(kSourceBlocks, n);
  std::vector<std::vector<double>> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    partial[b].assign(n, 0.0);
    BrandesWorkspace ws(n);
    for (std::size_t s = b; s < n; s += blocks) ws.run(g, static_cast<NodeId>(s), partial[b]);
  });
  std::vector<double> out(n, 0.0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < n; ++i) out[i] += p[i];
  return out;
}

double clustering_coefficient(const GraphSnapshot& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "no nodes");
  double sum = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const auto nbrs = g.neighbors(i);
    const std::size_t k = nbrs.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = x + 1; y < k; ++y)
        if (g.has_edge(nbrs[x], nbrs[y])) ++links;
    sum += 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return sum / static_cast<double>(n);
}

DistanceSummary distances(const GraphSnapshot& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "no nodes");
  std::size_t ncomp = 0;
  const auto label = component_labels(g, &ncomp);
  std::vector<std::size_t> size(ncomp, 0);
  for (auto l : label) ++size[l];
  const std::size_t big = static_cast<std::size_t>(
      std::max_element(size.begin(), size.end()) - size.begin());

  DistanceSummary out;
  out.largest_component_only = ncomp > 1;
  out.component_size = size[big];

  const std::size_t blocks = std::min(kSourceBlocks, n);
  std::vector<std::uint64_t> total(blocks, 0), pairs(blocks, 0);
  std::vector<std::uint32_t> diam(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    std::vector<std::uint32_t> dist(n);
    std::vector<NodeId> queue;
    queue.reserve(n);
    for (std::size_t s = b; s < n; s += blocks) {
      if (label[s] != big) continue;
      std::fill(dist.begin(), dist.end(), kUnreached);
      queue.clear();
      dist[s] = 0;
      queue.push_back(static_cast<NodeId>(s));
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId v = queue[head];
        for (NodeId w : g.neighbors(v)) {
          if (dist[w] != kUnreached) continue;
          dist[w] = dist[v] + 1;
          queue.push_back(w);
          total[b] += dist[w];
          ++pairs[b];
          diam[b] = std::max(diam[b], dist[w]);
        }
      }
    }
  });
  const std::uint64_t t = std::accumulate(total.begin(), total.end(), std::uint64_t{0});
  const std::uint64_t p = std::accumulate(pairs.begin(), pairs.end(), std::uint64_t{0});
  out.diameter = *std::max_element(diam.begin(), diam.end());
  out.apl = p ? static_cast<double>(t) / static_cast<double>(p) : 0.0;
  return out;
}

double rich_club(const GraphSnapshot& g, std::size_t k) {
  std::size_t rich = 0, links = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.degree(i) <= k) continue;
    ++rich;
    for (NodeId j : g.neighbors(i))
      if (j > i && g.degree(j) > k) ++links;
  }
  if (rich < 2)
    throw Error(ErrorCode::TooFewRichNodes,
                std::to_string(rich) + " node(s) with degree > " + std::to_string(k));
  return 2.0 * static_cast<double>(links) /
         (static_cast<double>(rich) * static_cast<double>(rich - 1));
}

std::size_t rich_club_threshold(const GraphSnapshot& g) {
  const std::size_t n = g.node_count();
  const std::size_t cap =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n))));
  auto k = g.degrees();
  std::sort(k.begin(), k.end(), std::greater<>());
  // N_{>t} <= cap  <=>  t >= k[cap] (0-based, descending) when cap < n.
  return cap < n ? k[cap] : 0;
}

PowerLawFit fit_power_law(std::span<const std::size_t> degrees, std::size_t k_min) {
  if (k_min < 1) throw Error(ErrorCode::InvalidParams, "k_min must be >= 1");
  const double x_min = static_cast<double>(k_min) - 0.5;
  double log_sum = 0.0;
  std::size_t n = 0;
  std::optional<std::size_t> first;
  bool all_equal = true;
  for (std::size_t k : degrees) {
    if (k < k_min) continue;
    if (!first) first = k;
    else if (k != *first) all_equal = false;
    log_sum += std::log(static_cast<double>(k) / x_min);
    ++n;
  }
  if (n < 100)
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(n) + " samples >= k_min " + std::to_string(k_min));
  if (all_equal) throw Error(ErrorCode::NotPowerLaw, "all samples are equal");
  PowerLawFit fit;
  fit.samples = n;
  fit.k_min = k_min;
  fit.alpha = 1.0 + static_cast<double>(n) / log_sum;
  fit.stderr_alpha = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(n));
  return fit;
}

BcDegreeFit bc_degree_exponent(std::span<const std::size_t> degrees,
                               std::span<const double> betweenness, double alpha_fit) {
  if (degrees.size() != betweenness.size())
    throw Error(ErrorCode::InvalidParams, "degree and betweenness sizes differ");
  std::map<std::size_t, std::pair<double, std::size_t>> classes;
  std::size_t used = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (betweenness[i] <= 0.0 || degrees[i] == 0) continue;
    auto& c = classes[degrees[i]];
    c.first += betweenness[i];
    c.second += 1;
    ++used;
  }
  if (used < 100 || classes.size() < 2)
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(used) + " nodes with g > 0 in " + std::to_string(classes.size()) +
                    " degree class(es)");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(classes.size());
  for (const auto& [k, c] : classes) {
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(c.first / static_cast<double>(c.second));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  BcDegreeFit fit;
  fit.classes = classes.size();
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (std::abs(fit.slope) < 1e-12)
    throw Error(ErrorCode::NotApplicable, "betweenness does not vary with degree");
  fit.delta = (alpha_fit - 1.0) / fit.slope + 1.0;
  return fit;
}

MetricsReport compute_metrics(const GraphSnapshot& g, std::span<const double> bc,
                              std::size_t k_min) {
  MetricsReport r;
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  r.clustering = clustering_coefficient(g);
  const auto d = distances(g);
  r.diameter = d.diameter;
  r.apl = d.apl;
  r.largest_component_only = d.largest_component_only;
  const auto deg = g.degrees();
  r.alpha_fit = fit_power_law(deg, k_min);
  r.k_star = rich_club_threshold(g);
  try {
    r.rc = rich_club(g, r.k_star);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewRichNodes) throw;
  }
  try {
    r.delta_fit = bc_degree_exponent(deg, bc, r.alpha_fit.alpha);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientSamples && e.code() != ErrorCode::NotApplicable) throw;
  }
  r.r_deg = degree_assortativity(g);
  r.r_g = pearson_r(bc, g, ValueKind::Betweenness);
  return r;
}

std::string metrics_csv_row(const MetricsReport& r, const std::string& model,
                            std::optional<double> lambda_c) {
  using detail::fmt;
  return std::to_string(r.nodes) + ',' + model + ',' + fmt(r.clustering) + ',' +
         std::to_string(r.diameter) + ',' + fmt(r.apl) + ',' + fmt(r.alpha_fit.alpha) + ',' +
         fmt(lambda_c) + ',' + fmt(r.rc);
}

}  // namespace dtvcn
