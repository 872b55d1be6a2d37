#include "dtvcn/flowcontrol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "dtvcn/error.hpp"
#include "dtvcn/parallel.hpp"
#include "dtvcn/random.hpp"
#include "format.hpp"

namespace dtvcn {

namespace {

std::vector<std::int64_t> bfs_distances(const GraphSnapshot& g, NodeId from) {
  std::vector<std::int64_t> dist(g.node_count(), -1);
  std::vector<NodeId> queue{from};
  dist[from] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId x = queue[head];
    for (NodeId y : g.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
  }
  return dist;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

}  // namespace

PathSet enumerate_shortest_paths(const GraphSnapshot& g, NodeId s, NodeId d, std::size_t cap) {
  const std::size_t n = g.node_count();
  if (s >= n || d >= n)
    throw Error(ErrorCode::InvalidNode, "node " + std::to_string(std::max(s, d)));
  if (s == d) throw Error(ErrorCode::InvalidParams, "source equals destination");
  const auto from_s = bfs_distances(g, s);
  if (from_s[d] < 0)
    throw Error(ErrorCode::Unreachable,
                std::to_string(d) + " is unreachable from " + std::to_string(s));
  const auto to_d = bfs_distances(g, d);
  const std::int64_t length = from_s[d];
  auto on_dag = [&](NodeId x, NodeId y) {
    return from_s[y] == from_s[x] + 1 && from_s[y] + to_d[y] == length;
  };

  // Path counts toward d, filled in decreasing distance from s.
  std::vector<NodeId> order;
  for (NodeId v = 0; v < n; ++v)
    if (from_s[v] >= 0 && to_d[v] >= 0 && from_s[v] + to_d[v] == length) order.push_back(v);
  std::sort(order.begin(), order.end(),
            [&](NodeId x, NodeId y) { return from_s[x] > from_s[y]; });
  std::vector<std::uint64_t> count(n, 0);
  for (NodeId v : order) {
    if (v == d) {
      count[v] = 1;
      continue;
    }
    for (NodeId y : g.neighbors(v))
      if (on_dag(v, y)) count[v] = saturating_add(count[v], count[y]);
  }

  PathSet out;
  out.count = count[s];
  Path current{s};
  // Iterative DFS; neighbor spans are sorted so paths come out in order.
  std::vector<std::size_t> cursor{0};
  while (!cursor.empty() && out.paths.size() < cap) {
    const NodeId x = current.back();
    if (x == d) {
      out.paths.push_back(current);
      current.pop_back();
      cursor.pop_back();
      continue;
    }
    const auto nbrs = g.neighbors(x);
    std::size_t& i = cursor.back();
    while (i < nbrs.size() && !on_dag(x, nbrs[i])) ++i;
    if (i == nbrs.size()) {
      current.pop_back();
      cursor.pop_back();
      continue;
    }
    current.push_back(nbrs[i++]);
    cursor.push_back(0);
  }
  out.truncated = out.count > out.paths.size();
  return out;
}

PathScore path_score(std::span<const NodeId> path, std::span<const Correlation> r_g_local) {
  PathScore s;
  for (NodeId v : path) {
    if (v >= r_g_local.size()) throw Error(ErrorCode::InvalidNode, "node " + std::to_string(v));
    if (r_g_local[v]) {
      s.wg += *r_g_local[v] + 1.0;
    } else {
      s.wg += 1.0;
      s.undefined_used = true;
    }
  }
  return s;
}

PathChoice select_paths(std::span<const Path> paths, std::span<const double> scores) {
  if (paths.empty() || paths.size() != scores.size())
    throw Error(ErrorCode::InvalidParams, "need one score per path and at least one path");
  PathChoice c;
  for (std::size_t i = 1; i < paths.size(); ++i) {
    auto better = [&](std::size_t cur, bool want_min) {
      if (scores[i] != scores[cur]) return want_min ? scores[i] < scores[cur] : scores[i] > scores[cur];
      return paths[i] < paths[cur];
    };
    if (better(c.min_index, true)) c.min_index = i;
    if (better(c.max_index, false)) c.max_index = i;
  }
  return c;
}

double link_price(const LinkPriceModel& model, double load) {
  if (!(load >= 0.0)) throw Error(ErrorCode::InvalidParams, "load must be >= 0");
  if (load == 0.0) return 0.0;
  return model.c * std::pow(load / model.C, model.omega);
}

std::vector<Edge> path_links(std::span<const NodeId> path) {
  std::vector<Edge> out;
  for (std::size_t i = 1; i < path.size(); ++i) out.push_back(Edge{path[i - 1], path[i]}.canonical());
  return out;
}

namespace {

// Flows with links mapped to dense indices.
struct Indexed {
  std::vector<std::vector<std::size_t>> links;
  std::size_t link_count = 0;
};

Indexed index_links(std::span<const Flow> flows) {
  std::map<Edge, std::size_t> ids;
  Indexed out;
  for (const Flow& f : flows) {
    auto& l = out.links.emplace_back();
    for (const Edge& e : f.links) {
      auto [it, fresh] = ids.emplace(e.canonical(), ids.size());
      l.push_back(it->second);
    }
  }
  out.link_count = ids.size();
  return out;
}

void link_prices(const Indexed& idx, std::span<const double> x, const LinkPriceModel& price,
                 std::vector<double>& load, std::vector<double>& psi) {
  load.assign(idx.link_count, 0.0);
  for (std::size_t r = 0; r < x.size(); ++r)
    for (std::size_t e : idx.links[r]) load[e] += x[r];
  psi.resize(idx.link_count);
  for (std::size_t e = 0; e < idx.link_count; ++e) psi[e] = link_price(price, load[e]);
}

double path_price(const Indexed& idx, std::size_t r, std::span<const double> psi) {
  double s = 0.0;
  for (std::size_t e : idx.links[r]) s += psi[e];
  return s;
}

double willingness(const Flow& f, double x) { return x * f.a / (x + f.b); }

}  // namespace

RateResult evolve_rates(std::span<const Flow> flows, const LinkPriceModel& price,
                        const RateOptions& options) {
  if (!(options.dt > 0.0) || !(options.x0 > 0.0) || !(options.tol > 0.0))
    throw Error(ErrorCode::InvalidParams, "dt, tol and x0 must be positive");
  const Indexed idx = index_links(flows);
  const std::size_t users = flows.size();
  RateResult out;
  out.dt = options.dt;
  std::vector<double> load, psi, deriv(users);

  for (;;) {
    std::vector<double> x(users, options.x0);
    out.trace.clear();
    bool finite = true;
    std::size_t it = 0;
    out.converged = false;
    for (; it <= options.max_iters; ++it) {
      link_prices(idx, x, price, load, psi);
      double worst = 0.0;
      for (std::size_t r = 0; r < users; ++r) {
        deriv[r] = flows[r].theta * (willingness(flows[r], x[r]) - x[r] * path_price(idx, r, psi));
        worst = std::max(worst, std::abs(deriv[r]));
        if (!std::isfinite(deriv[r])) finite = false;
      }
      if (!finite) break;
      if (options.trace_every && it % options.trace_every == 0) out.trace.push_back({it, x});
      if (worst < options.tol) {
        out.converged = true;
        break;
      }
      if (it == options.max_iters) break;
      for (std::size_t r = 0; r < users; ++r) x[r] = std::max(0.0, x[r] + out.dt * deriv[r]);
    }
    if (!finite && out.restarts < 3) {
      ++out.restarts;
      out.dt /= 2.0;
      continue;
    }
    out.x = std::move(x);
    out.iterations = it;
    return out;
  }
}

double equilibrium_residual(std::span<const Flow> flows, const LinkPriceModel& price,
                            std::span<const double> x) {
  const Indexed idx = index_links(flows);
  std::vector<double> load, psi;
  link_prices(idx, x, price, load, psi);
  double worst = 0.0;
  for (std::size_t r = 0; r < flows.size(); ++r)
    worst = std::max(worst, std::abs(willingness(flows[r], x[r]) - x[r] * path_price(idx, r, psi)));
  return worst;
}

std::vector<double> system_oracle(std::span<const Flow> flows, const LinkPriceModel& price,
                                  const OracleOptions& options) {
  const Indexed idx = index_links(flows);
  const std::size_t users = flows.size();
  if (users > 10 || idx.link_count > 20)
    throw Error(ErrorCode::InvalidParams, "oracle limited to 10 flows and 20 links");
  if (users == 0) return {};

  // Best response of flow r with the others fixed: the x >= 0 where
  // a / (x + b) meets the path price, which increases in x.
  auto best_response = [&](std::size_t r, std::span<const double> x) {
    std::vector<double> base(idx.link_count, 0.0);
    for (std::size_t q = 0; q < users; ++q)
      if (q != r)
        for (std::size_t e : idx.links[q]) base[e] += x[q];
    auto gap = [&](double v) {
      double p = 0.0;
      for (std::size_t e : idx.links[r]) p += link_price(price, base[e] + v);
      return flows[r].a / (v + flows[r].b) - p;
    };
    if (gap(0.0) <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (gap(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 1e12) return hi;  // no price on this flow's links
    }
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
      const double mid = 0.5 * (lo + hi);
      (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  Rng rng(options.seed);
  std::vector<std::vector<double>> found;
  for (int start = 0; start < options.starts; ++start) {
    std::vector<double> x(users), next(users);
    for (double& v : x) v = 0.05 + 2.0 * rng.uniform();
    for (std::size_t it = 0; it < options.max_iters; ++it) {
      double change = 0.0;
      for (std::size_t r = 0; r < users; ++r) {
        next[r] = (1.0 - options.damping) * x[r] + options.damping * best_response(r, x);
        change = std::max(change, std::abs(next[r] - x[r]));
      }
      x.swap(next);
      if (change < options.tol) {
        found.push_back(x);
        break;
      }
    }
  }
  if (found.empty())
    throw Error(ErrorCode::NoFixedPointFound, "no start converged");
  for (const auto& f : found)
    for (std::size_t r = 0; r < users; ++r)
      if (std::abs(f[r] - found.front()[r]) > 1e-8)
        throw Error(ErrorCode::NoFixedPointFound, "starts disagree on the fixed point");
  return found.front();
}

std::vector<UserSession> sample_users(const GraphSnapshot& g, std::size_t count,
                                      std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::size_t comps = 0;
  const auto label = component_labels(g, &comps);
  std::vector<std::size_t> size(comps, 0);
  for (auto c : label) ++size[c];
  std::uint64_t pairs = 0;
  for (auto s : size) pairs += std::uint64_t(s) * (s - 1);
  if (pairs < count)
    throw Error(ErrorCode::InvalidParams, "only " + std::to_string(pairs) + " connected pairs");

  Rng rng(seed);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<UserSession> out;
  while (out.size() < count) {
    const auto s = static_cast<NodeId>(rng.below(n));
    const auto d = static_cast<NodeId>(rng.below(n));
    if (s == d || label[s] != label[d] || !seen.emplace(s, d).second) continue;
    UserSession u;
    u.source = s;
    u.destination = d;
    u.a = 1.0 + 9.0 * rng.uniform();
    u.b = 1.0;
    out.push_back(std::move(u));
  }
  return out;
}

void plan_routes(const GraphSnapshot& g, std::span<const Correlation> r_g_local,
                 std::span<UserSession> users, std::size_t cap) {
  parallel_for(users.size(), [&](std::size_t k) {
    UserSession& u = users[k];
    u.paths = enumerate_shortest_paths(g, u.source, u.destination, cap);
    u.wg.clear();
    u.wg_undefined_used = false;
    for (const Path& p : u.paths.paths) {
      const auto s = path_score(p, r_g_local);
      u.wg.push_back(s.wg);
      u.wg_undefined_used |= s.undefined_used;
    }
    u.chosen = select_paths(u.paths.paths, u.wg);
  });
}

RoutingOutcome route_rates(const GraphSnapshot&, std::span<const UserSession> users,
                           const LinkPriceModel& price, const RateOptions& options) {
  std::vector<Flow> lo, hi;
  for (const UserSession& u : users) {
    if (u.paths.paths.empty()) throw Error(ErrorCode::InvalidParams, "session has no paths");
    lo.push_back({path_links(u.paths.paths[u.chosen.min_index]), u.a, u.b, 1.0});
    hi.push_back({path_links(u.paths.paths[u.chosen.max_index]), u.a, u.b, 1.0});
  }
  return {evolve_rates(lo, price, options), evolve_rates(hi, price, options)};
}

void write_routing_csv(std::ostream& out, std::span<const UserSession> users,
                       const RoutingOutcome& outcome) {
  out << "user,s,d,chi,wg_min,wg_max,xstar_min_path,xstar_max_path,converged\n";
  const bool converged = outcome.on_min.converged && outcome.on_max.converged;
  for (std::size_t k = 0; k < users.size(); ++k) {
    const UserSession& u = users[k];
    out << k << ',' << u.source << ',' << u.destination << ',' << u.paths.count << ','
        << detail::fmt(u.wg[u.chosen.min_index]) << ',' << detail::fmt(u.wg[u.chosen.max_index])
        << ',' << detail::fmt(outcome.on_min.x[k]) << ',' << detail::fmt(outcome.on_max.x[k]) << ','
        << (converged ? 1 : 0) << '\n';
  }
}

void write_rate_trace_csv(std::ostream& out, std::span<const RateSample> trace) {
  out << "iter,user,x\n";
  for (const RateSample& s : trace)
    for (std::size_t r = 0; r < s.x.size(); ++r)
      out << s.iter << ',' << r << ',' << detail::fmt(s.x[r]) << '\n';
}

}  // namespace dtvcn
