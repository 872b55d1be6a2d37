#include <dtvcn/error.hpp>
#include <dtvcn/graph_io.hpp>
#include <dtvcn/pipeline.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dtvcn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ExperimentConfig small(const fs::path& dir) {
  ExperimentConfig c;
  c.nodes = 300;
  c.users.count = 20;
  c.traffic.estimate_options.steps = {100, 400};
  c.traffic.estimate_options.rounds = 4;
  c.outputs.dir = dir;
  return c;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dtvcn_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Pipeline, RunWritesEveryArtifactWithSchemas) {
  const auto dir = scratch("run");
  Experiment e(small(dir));
  e.run();
  const std::map<std::string, std::string> headers{
      {"metrics.csv", "N,model,clustering,diameter,apl,alpha,lambda_c,rc"},
      {"growth_trace.csv", "t,nodes,edges,f_add,f_rewire,f_delete,skipped_deletes"},
      {"node_scores.csv", "node,degree,betweenness,zeta,r_local"},
      {"andn.csv", "k,knn_mean"},
      {"lambda_sweep.csv", "lambda,zeta,slope,delivered,generated"},
      {"lambda_c.csv", "lambda_c_theoretical,lambda_c_estimated"},
      {"routing.csv", "user,s,d,chi,wg_min,wg_max,xstar_min_path,xstar_max_path,converged"},
      {"rate_trace.csv", "iter,user,x"},
      {"fit_summary.csv", "name,value"}};
  for (const auto& [file, header] : headers) {
    const auto rows = lines(slurp(dir / file));
    ASSERT_GE(rows.size(), 2u) << file;
    EXPECT_EQ(rows[0], header) << file;
    const auto cols = std::count(header.begin(), header.end(), ',');
    for (const auto& r : rows) EXPECT_EQ(std::count(r.begin(), r.end(), ','), cols) << file << ": " << r;
  }
  EXPECT_TRUE(fs::exists(dir / "graph.json"));
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  EXPECT_EQ(lines(slurp(dir / "metrics.csv")).size(), 2u);
  EXPECT_EQ(lines(slurp(dir / "routing.csv")).size(), 21u);
  EXPECT_EQ(e.written().size(), 11u);
}

TEST(Pipeline, RepeatedRunsAreByteIdentical) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  Experiment(small(a)).run();
  Experiment(small(b)).run();
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "config.json") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
  }
}

TEST(Pipeline, EmitListFiltersArtifacts) {
  const auto dir = scratch("emit");
  auto c = small(dir);
  c.outputs.emit = {"metrics", "lambda_c"};
  Experiment e(c);
  e.emit_generate();
  e.emit_metrics();
  e.emit_traffic();
  e.emit_route();
  EXPECT_EQ(e.written().size(), 2u);
  EXPECT_FALSE(fs::exists(dir / "graph.json"));
  EXPECT_TRUE(fs::exists(dir / "metrics.csv"));
}

TEST(Pipeline, SavedLogReproducesMetrics) {
  const auto a = scratch("log_a"), b = scratch("log_b");
  Experiment first(small(a));
  first.emit_generate();
  first.emit_metrics();
  Experiment second(small(b));
  second.use_event_log(load_event_log(a / "graph.json"));
  second.emit_metrics();
  EXPECT_EQ(slurp(a / "metrics.csv"), slurp(b / "metrics.csv"));
  EXPECT_EQ(slurp(a / "node_scores.csv"), slurp(b / "node_scores.csv"));
}

TEST(Pipeline, InvalidConfigRejected) {
  auto c = small(scratch("bad"));
  c.growth.gamma = 0.4;
  try {
    Experiment e(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
    EXPECT_NE(std::string(e.what()).find("growth.gamma"), std::string::npos);
  }
}

TEST(Pipeline, StageNamedInModuleErrors) {
  auto c = small(scratch("stage"));
  c.users.count = 1'000'000;  // more ordered pairs than 300 nodes have
  Experiment e(c);
  try {
    e.users();
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::InvalidParams);
    EXPECT_NE(std::string(err.what()).find("stage route"), std::string::npos);
  }
}

TEST(Compare, ThreeModelsThreeRows) {
  auto c = small(scratch("cmp"));
  const auto rows = compare_models(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].model, GrowthModel::BA);
  EXPECT_EQ(rows[2].model, GrowthModel::DTVCN);
  std::ostringstream csv;
  write_comparison_csv(csv, rows);
  EXPECT_EQ(lines(csv.str()).size(), 4u);
}

TEST(Compare, SizeListIsCartesian) {
  auto c = small(scratch("cmp2"));
  c.compare.nodes = {200, 300};
  const auto rows = compare_models(c);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].nodes, 200u);
  EXPECT_EQ(rows[5].nodes, 300u);
  EXPECT_EQ(rows[5].report.nodes, 300u);
}

TEST(Compare, SingleModelIsTooFew) {
  auto c = small(scratch("cmp3"));
  c.compare.models = {GrowthModel::DTVCN};
  try {
    compare_models(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewModels);
  }
}
