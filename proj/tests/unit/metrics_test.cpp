#include <dtvcn/error.hpp>
#include <dtvcn/generator.hpp>
#include <dtvcn/metrics.hpp>
#include <dtvcn/random.hpp>

#include <gtest/gtest.h>

#include <cmath>

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

GraphSnapshot two_hubs() {
  // hubs 0 and 1 joined, each with three private leaves
  return GraphSnapshot::from_edges(
      8, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {1, 6}, {1, 7}});
}

}  // namespace

TEST(Betweenness, Examples) {
  EXPECT_DOUBLE_EQ(betweenness(path_graph(3))[1], 2.0);
  EXPECT_DOUBLE_EQ(betweenness(star_graph(5))[0], 12.0);
  for (double g : betweenness(complete_graph(3))) EXPECT_DOUBLE_EQ(g, 0.0);
  // C4: each node carries half of each of its two opposite ordered pairs
  for (double g : betweenness(cycle_graph(4))) EXPECT_DOUBLE_EQ(g, 1.0);
}

TEST(Betweenness, MatchesPathEnumerationOnAllGraphsUpTo8Nodes) {
  std::size_t graphs = 0;
  oracle::for_each_graph_up_to_8(std::string(DTVCN_TEST_DATA_DIR) + "/graph_atlas.txt",
                                 [&](const GraphSnapshot& g) {
                                   ++graphs;
                                   const auto fast = betweenness(g);
                                   const auto slow = oracle::brute_force_betweenness(g);
                                   for (std::size_t i = 0; i < fast.size(); ++i)
                                     ASSERT_NEAR(fast[i], slow[i], 1e-9);
                                 });
  EXPECT_GT(graphs, 1252u);
}

TEST(Betweenness, SumEqualsTransitLengths) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = oracle::gnp(40, 0.06, seed);  // often disconnected
    const auto bc = betweenness(g);
    double lhs = 0.0, rhs = 0.0;
    for (double x : bc) lhs += x;
    for (NodeId s = 0; s < g.node_count(); ++s)
      for (int d : oracle::bfs(g, s))
        if (d > 0) rhs += d - 1;
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, rhs));
  }
}

TEST(Clustering, Examples) {
  EXPECT_DOUBLE_EQ(clustering_coefficient(complete_graph(3)), 1.0);
  EXPECT_DOUBLE_EQ(clustering_coefficient(star_graph(5)), 0.0);
  // K4 minus (0,1): nodes 0 and 1 have one triangle over one pair, nodes 2
  // and 3 have two triangles over three pairs
  const auto g = GraphSnapshot::from_edges(4, std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_NEAR(clustering_coefficient(g), (1.0 + 1.0 + 2.0 / 3 + 2.0 / 3) / 4, 1e-12);
}

TEST(Clustering, InUnitInterval) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double c = clustering_coefficient(oracle::gnp(20, 0.3, seed));
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(Distances, Examples) {
  const auto p4 = distances(path_graph(4));
  EXPECT_EQ(p4.diameter, 3u);
  EXPECT_NEAR(p4.apl, 20.0 / 12.0, 1e-12);
  const auto k5 = distances(complete_graph(5));
  EXPECT_EQ(k5.diameter, 1u);
  EXPECT_DOUBLE_EQ(k5.apl, 1.0);
  const auto s5 = distances(star_graph(5));
  EXPECT_EQ(s5.diameter, 2u);
  EXPECT_NEAR(s5.apl, 1.6, 1e-12);
  EXPECT_FALSE(s5.largest_component_only);
}

TEST(Distances, DisconnectedUsesLargestComponent) {
  const auto g = GraphSnapshot::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {4, 5}});
  const auto d = distances(g);
  EXPECT_TRUE(d.largest_component_only);
  EXPECT_EQ(d.component_size, 4u);
  EXPECT_EQ(d.diameter, 3u);
  EXPECT_NEAR(d.apl, 20.0 / 12.0, 1e-12);
}

TEST(Distances, AplNotAboveDiameter) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto d = distances(oracle::gnp(30, 0.1, seed));
    EXPECT_LE(d.apl, static_cast<double>(d.diameter));
  }
}

TEST(RichClub, Examples) {
  EXPECT_DOUBLE_EQ(rich_club(complete_graph(5), 2), 1.0);
  EXPECT_EQ(code_of([] { rich_club(star_graph(5), 1); }), ErrorCode::TooFewRichNodes);
  EXPECT_DOUBLE_EQ(rich_club(two_hubs(), 2), 1.0);
}

TEST(RichClub, InUnitIntervalWhereDefined) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = oracle::gnp(40, 0.15, seed);
    for (std::size_t k = 0; k < 15; ++k) {
      try {
        const double phi = rich_club(g, k);
        EXPECT_GE(phi, 0.0);
        EXPECT_LE(phi, 1.0);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooFewRichNodes);
      }
    }
  }
}

TEST(RichClub, ThresholdKeepsTopFivePercent) {
  const auto g = two_hubs();
  // cap = max(2, ceil(0.4)) = 2; N_{>1} = 2
  EXPECT_EQ(rich_club_threshold(g), 1u);
  GrowthParams p;
  p.T = 995;
  const auto big = grow(p).final_graph;
  const std::size_t k = rich_club_threshold(big);
  auto above = [&](std::size_t t) {
    std::size_t c = 0;
    for (auto d : big.degrees()) c += d > t;
    return c;
  };
  EXPECT_LE(above(k), 50u);
  if (k > 0) { EXPECT_GT(above(k - 1), 50u); }
}

TEST(PowerLawFit, MatchesExpectedEstimatorAtKmin3) {
  // The half-step estimator is biased at small k_min: its expectation for
  // alpha = 2.5, k_min = 3 is about 2.446, not 2.5.
  const oracle::DiscretePowerLaw law(2.5, 3);
  Rng rng(99);
  std::vector<std::size_t> k(100'000);
  for (auto& x : k) x = law.sample(rng);
  const auto fit = fit_power_law(k, 3);
  EXPECT_EQ(fit.samples, 100'000u);
  EXPECT_NEAR(fit.alpha, law.expected_mle(), 4 * fit.stderr_alpha);
  EXPECT_NEAR(fit.stderr_alpha, (fit.alpha - 1) / std::sqrt(1e5), 1e-12);
}

TEST(PowerLawFit, RecoversExponentAboveSmallKmin) {
  for (double alpha : {2.2, 2.5, 3.0}) {
    const oracle::DiscretePowerLaw law(alpha, 10);
    Rng rng(static_cast<std::uint64_t>(alpha * 100));
    std::vector<std::size_t> k(100'000);
    for (auto& x : k) x = law.sample(rng);
    EXPECT_NEAR(fit_power_law(k, 10).alpha, alpha, 0.05) << alpha;
  }
}

TEST(PowerLawFit, Errors) {
  std::vector<std::size_t> same(500, 4);
  EXPECT_EQ(code_of([&] { fit_power_law(same, 2); }), ErrorCode::NotPowerLaw);
  std::vector<std::size_t> few(99, 5);
  few[0] = 7;
  EXPECT_EQ(code_of([&] { fit_power_law(few, 2); }), ErrorCode::InsufficientSamples);
}

TEST(PowerLawFit, BaNetworkOfTenThousandNodes) {
  GrowthParams p;
  p.model = GrowthModel::BA;
  p.beta = 0.99;  // f_add = M = 3
  p.T = 10'000 - 5;
  const auto g = grow(p).final_graph;
  const auto fit = fit_power_law(g.degrees(), p.budget().add);
  EXPECT_GE(fit.alpha, 2.5);
  EXPECT_LE(fit.alpha, 3.2);
}

TEST(BcDegreeExponent, SquareLawGivesDeltaTwo) {
  std::vector<std::size_t> k;
  std::vector<double> g;
  for (std::size_t i = 0; i < 300; ++i) {
    k.push_back(2 + i % 30);
    g.push_back(static_cast<double>(k.back() * k.back()));
  }
  const auto fit = bc_degree_exponent(k, g, 3.0);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.delta, 2.0, 1e-12);
}

TEST(BcDegreeExponent, RegularGraphIsInsufficient) {
  const auto g = cycle_graph(200);
  const auto deg = g.degrees();
  EXPECT_EQ(code_of([&] { bc_degree_exponent(deg, betweenness(g), 2.5); }), ErrorCode::InsufficientSamples);
}

TEST(ComputeMetrics, DtvcnNetwork) {
  GrowthParams p;
  p.T = 4995;
  const auto g = grow(p).final_graph;
  const auto bc = betweenness(g);
  const auto m = compute_metrics(g, bc, p.budget().add);
  EXPECT_EQ(m.nodes, 5000u);
  ASSERT_TRUE(m.delta_fit.has_value());
  EXPECT_GT(m.delta_fit->slope, 0.0);
  EXPECT_GE(m.clustering, 0.0);
  EXPECT_LE(m.clustering, 1.0);
  EXPECT_LE(m.apl, static_cast<double>(m.diameter));
  EXPECT_GT(m.alpha_fit.alpha, 1.0);
  ASSERT_TRUE(m.rc.has_value());
  EXPECT_GE(*m.rc, 0.0);
  EXPECT_LE(*m.rc, 1.0);
}

TEST(ComputeMetrics, CsvRow) {
  const auto g = star_graph(5);
  const auto bc = betweenness(g);
  MetricsReport m;
  m.nodes = 5;
  m.clustering = 0.0;
  m.diameter = 2;
  m.apl = 1.6;
  m.alpha_fit.alpha = 2.5;
  const auto row = metrics_csv_row(m, "DTVCN", std::nullopt);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 7);
  EXPECT_EQ(row.substr(0, 8), "5,DTVCN,");
  EXPECT_NE(row.find("NA"), std::string::npos);
  (void)bc;
}
