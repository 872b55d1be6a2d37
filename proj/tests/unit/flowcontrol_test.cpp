#include <dtvcn/error.hpp>
#include <dtvcn/flowcontrol.hpp>
#include <dtvcn/generator.hpp>
#include <dtvcn/metrics.hpp>
#include <dtvcn/random.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"

using namespace dtvcn;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

const LinkPriceModel kPrice{1.0, 1.0, 2.0};

Flow flow_on(std::vector<Edge> links, double a = 1.0) { return Flow{std::move(links), a, 1.0, 1.0}; }

double single_user_root() {
  return oracle::bisect([](double x) { return x * x * x + x * x - 1.0; }, 0.0, 1.0);
}

}  // namespace

TEST(ShortestPaths, Examples) {
  const auto c4 = enumerate_shortest_paths(cycle_graph(4), 0, 2);
  EXPECT_EQ(c4.paths, (std::vector<Path>{{0, 1, 2}, {0, 3, 2}}));
  EXPECT_EQ(c4.count, 2u);
  EXPECT_FALSE(c4.truncated);
  const auto p4 = enumerate_shortest_paths(path_graph(4), 0, 3);
  EXPECT_EQ(p4.paths, (std::vector<Path>{{0, 1, 2, 3}}));
  // K_{2,3}: {0,1} vs {2,3,4}
  std::vector<Edge> e;
  for (NodeId a : {0u, 1u})
    for (NodeId b : {2u, 3u, 4u}) e.push_back({a, b});
  const auto k23 = enumerate_shortest_paths(GraphSnapshot::from_edges(5, e), 0, 1);
  EXPECT_EQ(k23.count, 3u);
  for (const auto& p : k23.paths) EXPECT_EQ(p.size(), 3u);
}

TEST(ShortestPaths, MatchExhaustiveEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = oracle::gnp(12, 0.3, seed);
    for (NodeId s = 0; s < 12; ++s)
      for (NodeId d = 0; d < 12; ++d) {
        if (s == d) continue;
        const auto expect = oracle::all_shortest_paths(g, s, d);
        if (expect.empty()) {
          EXPECT_EQ(code_of([&] { enumerate_shortest_paths(g, s, d); }), ErrorCode::Unreachable);
          continue;
        }
        const auto got = enumerate_shortest_paths(g, s, d);
        EXPECT_EQ(got.paths, expect);
        EXPECT_EQ(got.count, expect.size());
      }
  }
}

TEST(ShortestPaths, CapTruncatesAndCountsAll) {
  // ladder of 4 diamonds: 2^4 shortest paths end to end
  std::vector<Edge> e;
  NodeId x = 0;
  for (int i = 0; i < 4; ++i) {
    e.push_back({x, x + 1});
    e.push_back({x, x + 2});
    e.push_back({x + 1, x + 3});
    e.push_back({x + 2, x + 3});
    x += 3;
  }
  const auto g = GraphSnapshot::from_edges(x + 1, e);
  const auto ps = enumerate_shortest_paths(g, 0, x, 5);
  EXPECT_EQ(ps.count, 16u);
  EXPECT_EQ(ps.paths.size(), 5u);
  EXPECT_TRUE(ps.truncated);
  EXPECT_TRUE(std::is_sorted(ps.paths.begin(), ps.paths.end()));
}

TEST(ShortestPaths, Errors) {
  EXPECT_EQ(code_of([] { enumerate_shortest_paths(path_graph(3), 1, 1); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([] { enumerate_shortest_paths(path_graph(3), 0, 7); }), ErrorCode::InvalidNode);
}

TEST(PathScore, NeutralValues) {
  const std::vector<Correlation> r(3, 0.0);
  const Path p{0, 1, 2};
  EXPECT_DOUBLE_EQ(path_score(p, r).wg, 3.0);
}

TEST(PathScore, UndefinedCountsAsOne) {
  const std::vector<Correlation> r{std::nullopt, 0.5, std::nullopt};
  const Path p{0, 1, 2};
  const auto s = path_score(p, r);
  EXPECT_DOUBLE_EQ(s.wg, 1.0 + 1.5 + 1.0);
  EXPECT_TRUE(s.undefined_used);
}

TEST(PathScore, PermutationInvariant) {
  const std::vector<Correlation> r{0.1, -0.4, 0.7, 0.2};
  const Path a{0, 1, 2, 3}, b{3, 2, 1, 0}, c{2, 0, 3, 1};
  EXPECT_DOUBLE_EQ(path_score(a, r).wg, path_score(b, r).wg);
  EXPECT_DOUBLE_EQ(path_score(a, r).wg, path_score(c, r).wg);
}

TEST(PathScore, HubDetourScoresHigher) {
  // s=0, d=6; route 0-1-6 crosses hub 1 (leaves 3,4,5), route 0-2-6 avoids it
  const auto g = GraphSnapshot::from_edges(
      7, std::vector<Edge>{{0, 1}, {1, 6}, {0, 2}, {2, 6}, {1, 3}, {1, 4}, {1, 5}});
  std::vector<Correlation> r(7, -0.5);
  r[1] = 1.0;
  const auto ps = enumerate_shortest_paths(g, 0, 6);
  ASSERT_EQ(ps.paths, (std::vector<Path>{{0, 1, 6}, {0, 2, 6}}));
  const double hub = path_score(ps.paths[0], r).wg, avoid = path_score(ps.paths[1], r).wg;
  EXPECT_DOUBLE_EQ(hub, 3.0);
  EXPECT_DOUBLE_EQ(avoid, 1.5);
  const std::vector<double> scores{hub, avoid};
  const auto choice = select_paths(ps.paths, scores);
  EXPECT_EQ(choice.min_index, 1u);
  EXPECT_EQ(choice.max_index, 0u);
}

TEST(SelectPaths, Rules) {
  const std::vector<Path> one{{0, 1}};
  const std::vector<double> s1{2.0};
  EXPECT_EQ(select_paths(one, s1).min_index, 0u);
  EXPECT_EQ(select_paths(one, s1).max_index, 0u);
  const std::vector<Path> two{{0, 1, 3}, {0, 2, 3}};
  const std::vector<double> s2{3.0, 4.5};
  EXPECT_EQ(select_paths(two, s2).min_index, 0u);
  EXPECT_EQ(select_paths(two, s2).max_index, 1u);
  const std::vector<Path> three{{0, 1, 4}, {0, 2, 4}, {0, 3, 4}};
  const std::vector<double> same{3.0, 3.0, 3.0};
  EXPECT_EQ(select_paths(three, same).min_index, 0u);
  EXPECT_EQ(select_paths(three, same).max_index, 0u);
}

TEST(SelectPaths, ShiftInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::gnp(14, 0.3, static_cast<std::uint64_t>(trial));
    std::vector<Correlation> r(14), shifted(14);
    for (int i = 0; i < 14; ++i) {
      r[i] = 2 * rng.uniform() - 1;
      shifted[i] = *r[i] + 0.37;
    }
    if (oracle::bfs(g, 0)[13] < 0) continue;
    const auto ps = enumerate_shortest_paths(g, 0, 13, 64);
    std::vector<double> a, b;
    for (const auto& p : ps.paths) {
      a.push_back(path_score(p, r).wg);
      b.push_back(path_score(p, shifted).wg);
    }
    const auto ca = select_paths(ps.paths, a), cb = select_paths(ps.paths, b);
    EXPECT_EQ(ca.min_index, cb.min_index);
    EXPECT_EQ(ca.max_index, cb.max_index);
  }
}

TEST(LinkPrice, Examples) {
  EXPECT_DOUBLE_EQ(link_price(kPrice, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(link_price(kPrice, 0.5), 0.25);
  const LinkPriceModel m{2.5, 3.0, 1.7};
  EXPECT_DOUBLE_EQ(link_price(m, 3.0), 2.5);
}

TEST(LinkPrice, MonotoneInLoad) {
  // raising a user's rate raises the load on each of its links
  const LinkPriceModel m{1.3, 2.0, 1.5};
  double prev = -1;
  for (double y = 0; y < 10; y += 0.01) {
    const double p = link_price(m, y);
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(EvolveRates, SingleUserCubicRoot) {
  const std::vector<Flow> f{flow_on({{0, 1}})};
  const auto r = evolve_rates(f, kPrice);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], single_user_root(), 1e-6);
  EXPECT_NEAR(r.x[0], 0.7549, 1e-4);
  EXPECT_NEAR(system_oracle(f, kPrice)[0], single_user_root(), 1e-6);
}

TEST(EvolveRates, ZeroThetaFreezesRates) {
  std::vector<Flow> f{flow_on({{0, 1}}), flow_on({{1, 2}}, 4.0)};
  for (auto& x : f) x.theta = 0.0;
  RateOptions o;
  o.x0 = 0.3;
  const auto r = evolve_rates(f, kPrice, o);
  EXPECT_EQ(r.x, (std::vector<double>{0.3, 0.3}));
}

TEST(EvolveRates, SymmetricDisjointUsers) {
  const std::vector<Flow> f{flow_on({{0, 1}}, 3.0), flow_on({{2, 3}}, 3.0)};
  const auto r = evolve_rates(f, kPrice);
  ASSERT_TRUE(r.converged);
  EXPECT_DOUBLE_EQ(r.x[0], r.x[1]);
}

TEST(EvolveRates, SharedLinkAgreesWithOracle) {
  // x/(x+1) = x (2x)^2  <=>  4x^3 + 4x^2 - 1 = 0
  const std::vector<Flow> f{flow_on({{0, 1}}), flow_on({{0, 1}})};
  const double root = oracle::bisect([](double x) { return 4 * x * x * x + 4 * x * x - 1; }, 0.0, 1.0);
  const auto r = evolve_rates(f, kPrice);
  const auto o = system_oracle(f, kPrice);
  ASSERT_TRUE(r.converged);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(r.x[i], o[i], 1e-6);
    EXPECT_NEAR(o[i], root, 1e-9);
  }
}

TEST(EvolveRates, RandomInstancesAgreeWithOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Flow> flows;
    const int users = 2 + static_cast<int>(rng.below(5));
    for (int u = 0; u < users; ++u) {
      std::vector<Edge> links;
      const NodeId start = static_cast<NodeId>(rng.below(5));
      const int len = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < len; ++k) links.push_back({start + k, start + k + 1});
      flows.push_back(flow_on(links, 1 + 9 * rng.uniform()));
    }
    RateOptions opt;
    opt.tol = 1e-9;
    const auto r = evolve_rates(flows, kPrice, opt);
    ASSERT_TRUE(r.converged);
    const auto o = system_oracle(flows, kPrice);
    for (std::size_t i = 0; i < flows.size(); ++i) EXPECT_NEAR(r.x[i], o[i], 1e-6) << trial;
  }
}

TEST(EvolveRates, ResidualSmallAtConvergence) {
  const std::vector<Flow> f{flow_on({{0, 1}, {1, 2}}, 5.0), flow_on({{1, 2}}, 2.0), flow_on({{2, 3}}, 9.0)};
  RateOptions o;
  const auto r = evolve_rates(f, kPrice, o);
  ASSERT_TRUE(r.converged);
  EXPECT_LT(equilibrium_residual(f, kPrice, r.x), 10 * o.tol);
  for (double x : r.x) EXPECT_GE(x, 0.0);
}

TEST(EvolveRates, NonConvergedIsReported) {
  const std::vector<Flow> f{flow_on({{0, 1}})};
  RateOptions o;
  o.max_iters = 5;
  const auto r = evolve_rates(f, kPrice, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5u);
}

TEST(EvolveRates, NonFiniteStateHalvesStepThreeTimes) {
  // x^3 overflows at this start, whatever the step
  const std::vector<Flow> f{flow_on({{0, 1}})};
  RateOptions o;
  o.x0 = 1e120;
  const auto r = evolve_rates(f, kPrice, o);
  EXPECT_EQ(r.restarts, 3);
  EXPECT_DOUBLE_EQ(r.dt, o.dt / 8);
  EXPECT_FALSE(r.converged);
}

TEST(EvolveRates, TraceSamples) {
  const std::vector<Flow> f{flow_on({{0, 1}})};
  RateOptions o;
  o.trace_every = 100;
  const auto r = evolve_rates(f, kPrice, o);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().iter, 0u);
  EXPECT_EQ(r.trace.front().x[0], o.x0);
  std::ostringstream csv;
  write_rate_trace_csv(csv, r.trace);
  EXPECT_EQ(csv.str().substr(0, 11), "iter,user,x");
}

TEST(SystemOracle, Limits) {
  EXPECT_TRUE(system_oracle(std::vector<Flow>{}, kPrice).empty());
  std::vector<Flow> many(11, flow_on({{0, 1}}));
  EXPECT_EQ(code_of([&] { system_oracle(many, kPrice); }), ErrorCode::InvalidParams);
}

TEST(Users, SampledPairsAreDistinctAndConnected) {
  GrowthParams p;
  p.T = 195;
  const auto g = grow(p).final_graph;
  const auto users = sample_users(g, 60, 4);
  ASSERT_EQ(users.size(), 60u);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& u : users) {
    EXPECT_NE(u.source, u.destination);
    EXPECT_TRUE(seen.insert({u.source, u.destination}).second);
    EXPECT_GE(u.a, 1.0);
    EXPECT_LE(u.a, 10.0);
    EXPECT_EQ(u.b, 1.0);
  }
  EXPECT_EQ(code_of([] { sample_users(path_graph(3), 7, 1); }), ErrorCode::InvalidParams);
}

TEST(Users, RoutesPlannedAndRated) {
  GrowthParams p;
  p.T = 295;
  const auto g = grow(p).final_graph;
  const auto bc = betweenness(g);
  const auto rg = local_min_contribution(bc, g, ValueKind::Betweenness);
  auto users = sample_users(g, 30, 9);
  plan_routes(g, rg, users);
  for (const auto& u : users) {
    ASSERT_FALSE(u.paths.paths.empty());
    const auto len = u.paths.paths.front().size();
    for (const auto& path : u.paths.paths) {
      EXPECT_EQ(path.size(), len);
      EXPECT_EQ(path.front(), u.source);
      EXPECT_EQ(path.back(), u.destination);
    }
    EXPECT_LE(u.wg[u.chosen.min_index], u.wg[u.chosen.max_index]);
  }
  const auto out = route_rates(g, users, kPrice);
  EXPECT_TRUE(out.on_min.converged);
  EXPECT_TRUE(out.on_max.converged);
  std::ostringstream csv;
  write_routing_csv(csv, users, out);
  const auto text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 31);
}
