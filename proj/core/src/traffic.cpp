#include "dtvcn/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <string>

#include "dtvcn/error.hpp"
#include "dtvcn/parallel.hpp"
#include "dtvcn/random.hpp"
#include "format.hpp"

namespace dtvcn {

std::vector<int> capacities(const GraphSnapshot& g, const CapacityModel& model,
                            std::span<const double> betweenness) {
  if (!(model.cap_beta >= 0.0)) throw Error(ErrorCode::InvalidParams, "cap_beta must be >= 0");
  const std::size_t n = g.node_count();
  std::vector<int> c(n, 1);
  if (model.kind == CapacityKind::DegreeBased) {
    for (NodeId i = 0; i < n; ++i)
      c[i] = 1 + static_cast<int>(std::floor(model.cap_beta * static_cast<double>(g.degree(i))));
  } else {
    if (betweenness.size() != n)
      throw Error(ErrorCode::InvalidParams, "betweenness required for BetweennessBased capacity");
    for (NodeId i = 0; i < n; ++i)
      c[i] = 1 + static_cast<int>(
                     std::floor(model.cap_beta * betweenness[i] / static_cast<double>(n)));
  }
  return c;
}

CriticalRate lambda_c_theoretical(const GraphSnapshot& g, const CapacityModel& model,
                                  std::span<const double> betweenness) {
  const std::size_t n = g.node_count();
  if (betweenness.size() != n) throw Error(ErrorCode::InvalidParams, "betweenness size mismatch");
  const auto c = capacities(g, model, betweenness);
  CriticalRate out;
  double best_g = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const double gi = betweenness[i];
    if (gi > best_g || (gi == best_g && gi > 0.0 && c[i] > c[out.bottleneck])) {
      best_g = gi;
      out.bottleneck = i;
    }
  }
  if (!(best_g > 0.0)) {
    out.no_bottleneck = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = static_cast<double>(c[out.bottleneck]) * static_cast<double>(n - 1) / best_g;
  return out;
}

RoutingTable::RoutingTable(const GraphSnapshot& g, TieBreak tie, std::uint64_t salt)
    : n_(g.node_count()), next_(n_ * n_, kNone) {
  // One BFS per destination, counting shortest paths to it on the way out.
  parallel_for(n_, [&](std::size_t d) {
    std::vector<std::int64_t> dist(n_, -1);
    std::vector<double> paths(n_, 0.0);
    std::vector<NodeId> queue;
    queue.reserve(n_);
    dist[d] = 0;
    paths[d] = 1.0;
    queue.push_back(static_cast<NodeId>(d));
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId x = queue[head];
      for (NodeId y : g.neighbors(x)) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
        if (dist[y] == dist[x] + 1) paths[y] += paths[x];
      }
    }
    for (NodeId at = 0; at < n_; ++at) {
      if (at == d || dist[at] < 0) continue;
      NodeId& slot = next_[std::size_t(at) * n_ + d];
      if (tie == TieBreak::SmallestId) {
        for (NodeId y : g.neighbors(at))  // sorted ascending
          if (dist[y] == dist[at] - 1) {
            slot = y;
            break;
          }
        continue;
      }
      const std::uint64_t h = derive_seed(salt, std::uint64_t(at) * n_ + d);
      const double target = static_cast<double>(h >> 11) * 0x1.0p-53 * paths[at];
      double acc = 0.0;
      for (NodeId y : g.neighbors(at)) {
        if (dist[y] != dist[at] - 1) continue;
        acc += paths[y];
        slot = y;
        if (target < acc) break;
      }
    }
  });
}

TrafficRun simulate(const GraphSnapshot& g, const RoutingTable& routes,
                    std::span<const int> capacity, double lambda, std::uint64_t seed,
                    TrafficSteps steps) {
  const std::size_t n = g.node_count();
  if (routes.node_count() != n || capacity.size() != n)
    throw Error(ErrorCode::InvalidParams, "routing table or capacity size mismatch");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidParams, "lambda must be finite and >= 0");
  if (n >= 2 && !is_connected(g)) throw Error(ErrorCode::InvalidParams, "graph is not connected");

  TrafficRun run;
  run.lambda = lambda;
  run.steps = steps;
  const std::size_t total = steps.warmup + steps.window;
  run.num_packets.reserve(total);

  std::vector<std::deque<NodeId>> queue(n);  // destination per queued packet
  std::vector<std::pair<NodeId, NodeId>> moves;
  std::uint64_t queued = 0;
  Rng rng(seed);
  const auto draws = static_cast<std::size_t>(std::ceil(lambda));
  const double p = draws ? lambda / static_cast<double>(draws) : 0.0;

  for (std::size_t step = 0; step < total; ++step) {
    if (n >= 2 && draws > 0) {
      for (NodeId s = 0; s < n; ++s) {
        for (std::size_t k = 0; k < draws; ++k) {
          if (!rng.bernoulli(p)) continue;
          auto d = static_cast<NodeId>(rng.below(n - 1));
          if (d >= s) ++d;
          ++run.generated;
          const NodeId hop = routes.next_hop(s, d);
          if (hop == d) {
            ++run.delivered;
          } else {
            queue[hop].push_back(d);
            ++queued;
          }
        }
      }
    }

    moves.clear();
    for (NodeId i = 0; i < n; ++i) {
      auto& q = queue[i];
      const std::size_t sent = std::min<std::size_t>(q.size(), static_cast<std::size_t>(capacity[i]));
      for (std::size_t k = 0; k < sent; ++k) {
        const NodeId d = q.front();
        q.pop_front();
        moves.emplace_back(routes.next_hop(i, d), d);
      }
    }
    for (const auto& [hop, d] : moves) {
      if (hop == d) {
        ++run.delivered;
        --queued;
      } else {
        queue[hop].push_back(d);
      }
    }
    run.num_packets.push_back(queued);
  }

  run.final_queue.resize(n);
  for (NodeId i = 0; i < n; ++i) run.final_queue[i] = queue[i].size();
  return run;
}

OrderParameter order_parameter(const TrafficRun& run, double network_capacity,
                               std::size_t node_count) {
  if (run.steps.window < 100)
    throw Error(ErrorCode::WindowTooShort,
                "window of " + std::to_string(run.steps.window) + " steps, need >= 100");
  if (run.num_packets.size() < run.steps.window)
    throw Error(ErrorCode::WindowTooShort, "trace shorter than the window");
  OrderParameter out;
  const std::size_t w = run.steps.window;
  const std::size_t first = run.num_packets.size() - w;
  double mean_t = (static_cast<double>(w) - 1.0) / 2.0, mean_y = 0.0;
  for (std::size_t k = 0; k < w; ++k) mean_y += static_cast<double>(run.num_packets[first + k]);
  mean_y /= static_cast<double>(w);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < w; ++k) {
    const double dt = static_cast<double>(k) - mean_t;
    sxy += dt * (static_cast<double>(run.num_packets[first + k]) - mean_y);
    sxx += dt * dt;
  }
  out.slope = sxy / sxx;
  const double load = run.lambda * static_cast<double>(node_count);
  if (load > 0.0) out.zeta = std::max(0.0, network_capacity / load * out.slope);
  return out;
}

namespace {

double total_capacity(std::span<const int> c) {
  double s = 0.0;
  for (int x : c) s += x;
  return s;
}

}  // namespace

CriticalRateEstimate estimate_lambda_c(const GraphSnapshot& g, const CapacityModel& model,
                                       std::span<const double> betweenness, std::uint64_t seed,
                                       const EstimateOptions& options) {
  if (options.seeds < 1 || options.rounds < 0)
    throw Error(ErrorCode::InvalidParams, "seeds must be >= 1 and rounds >= 0");
  const auto cap = capacities(g, model, betweenness);
  const RoutingTable routes(g, options.tie);
  const double cap_total = total_capacity(cap);

  CriticalRateEstimate out;
  out.lambda_max = options.lambda_max;
  if (!(out.lambda_max > 0.0)) {
    const auto theory = betweenness.size() == g.node_count()
                            ? lambda_c_theoretical(g, model, betweenness)
                            : CriticalRate{0.0, true, 0};
    out.lambda_max = theory.no_bottleneck
                         ? 2.0 * static_cast<double>(*std::max_element(cap.begin(), cap.end()))
                         : 2.0 * theory.value;
  }

  // Seed-averaged order parameter; the same seeds at every lambda.
  auto mean_zeta = [&](double lambda) {
    std::vector<double> z(static_cast<std::size_t>(options.seeds));
    parallel_for(z.size(), [&](std::size_t s) {
      const auto r = simulate(g, routes, cap, lambda, derive_seed(seed, s), options.steps);
      z[s] = order_parameter(r, cap_total, g.node_count()).zeta;
    });
    double sum = 0.0;
    for (double x : z) sum += x;
    return sum / static_cast<double>(z.size());
  };

  double lo = 0.0, hi = out.lambda_max;
  if (mean_zeta(hi) <= options.epsilon) {
    out.no_transition = true;
    out.value = hi;
    return out;
  }
  for (int r = 0; r < options.rounds; ++r) {
    const double mid = 0.5 * (lo + hi);
    if (mean_zeta(mid) > options.epsilon)
      hi = mid;
    else
      lo = mid;
  }
  out.value = hi;
  return out;
}

std::vector<SweepPoint> sweep_lambda(const GraphSnapshot& g, std::span<const int> capacity,
                                     std::span<const double> lambdas, std::uint64_t seed,
                                     TrafficSteps steps, TieBreak tie) {
  const RoutingTable routes(g, tie);
  const double cap_total = total_capacity(capacity);
  std::vector<SweepPoint> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t k) {
    const auto r = simulate(g, routes, capacity, lambdas[k], seed, steps);
    out[k].lambda = lambdas[k];
    out[k].order = order_parameter(r, cap_total, g.node_count());
    out[k].delivered = r.delivered;
    out[k].generated = r.generated;
  });
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "lambda,zeta,slope,delivered,generated\n";
  for (const SweepPoint& p : points)
    out << detail::fmt(p.lambda) << ',' << detail::fmt(p.order.zeta) << ','
        << detail::fmt(p.order.slope) << ',' << p.delivered << ',' << p.generated << '\n';
}

void write_lambda_c_csv(std::ostream& out, const CriticalRate& theory,
                        const std::optional<CriticalRateEstimate>& estimate) {
  out << "lambda_c_theoretical,lambda_c_estimated\n";
  out << (theory.no_bottleneck ? std::string("inf") : detail::fmt(theory.value)) << ','
      << (estimate ? detail::fmt(estimate->value) : std::string("NA")) << '\n';
}

}  // namespace dtvcn
