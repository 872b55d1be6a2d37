#include <dtvcn/config.hpp>
#include <dtvcn/error.hpp>

#include <gtest/gtest.h>

using namespace dtvcn;

namespace {

Error error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << text;
  return Error(ErrorCode::Io, "");
}

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.nodes, 2000u);
  EXPECT_EQ(c.growth.model, GrowthModel::DTVCN);
  EXPECT_EQ(c.growth.M, 3u);
  EXPECT_DOUBLE_EQ(c.growth.beta, 0.6);
  EXPECT_EQ(c.capacity.kind, CapacityKind::DegreeBased);
  EXPECT_EQ(c.users.count, 100u);
  EXPECT_EQ(c.users.path_cap, 64u);
  EXPECT_DOUBLE_EQ(c.rate_control.ode.dt, 0.01);
  EXPECT_DOUBLE_EQ(c.rate_control.ode.tol, 1e-6);
  EXPECT_EQ(c.power_law_k_min(), 2u);
  EXPECT_EQ(c.growth_params(2000).T, 1995);
  EXPECT_EQ(c.outputs.emit, kArtifactNames);
}

TEST(Config, GammaBelowHalfNamesField) {
  const auto e = error_of(R"({"growth": {"gamma": 0.4}})");
  EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
  EXPECT_NE(std::string(e.what()).find("growth.gamma"), std::string::npos);
}

TEST(Config, UnknownFieldsRejectedWithPath) {
  auto e = error_of(R"({"growth": {"gama": 0.7}})");
  EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
  EXPECT_NE(std::string(e.what()).find("growth.gama"), std::string::npos);
  e = error_of(R"({"extra": 1})");
  EXPECT_NE(std::string(e.what()).find("extra"), std::string::npos);
}

TEST(Config, TypeAndValueErrors) {
  EXPECT_NE(std::string(error_of(R"({"growth": {"beta": "x"}})").what()).find("growth.beta"),
            std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"growth": {"M": -1}})").what()).find("growth.M"), std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"growth": {"model": "XYZ"}})").what()).find("growth.model"),
            std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"capacity": {"kind": "links"}})").what()).find("capacity.kind"),
            std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"outputs": {"emit": ["nope"]}})").what()).find("outputs.emit"),
            std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"traffic": {"window": 50}})").what()).find("traffic.window"),
            std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"compare": {"models": ["BA", 3]}})").what()).find("compare.models[1]"),
            std::string::npos);
  EXPECT_NE(std::string(error_of(R"({"growth": {"nodes": 5}})").what()).find("growth.nodes"),
            std::string::npos);
}

TEST(Config, SyntaxErrorIsParse) { EXPECT_EQ(error_of("{\"growth\": ").code(), ErrorCode::Parse); }

TEST(Config, ReadsEverySection) {
  const auto c = parse_config(R"({
    "growth": {"n0": 4, "nodes": 300, "M": 4, "beta": 0.5, "gamma": 0.7, "model": "tvcn", "seed": 9},
    "metrics": {"k_min": 3},
    "capacity": {"kind": "betweenness", "beta": 0.2},
    "traffic": {"estimate": false, "seed": 4, "epsilon": 0.1, "rounds": 5, "seeds": 2,
                "lambda_max": 1.5, "warmup": 100, "window": 400, "sweep": [0.5, 1.0],
                "tie_break": "smallest_id"},
    "rate_control": {"c": 2, "C": 3, "omega": 1.5, "dt": 0.02, "tol": 1e-7, "max_iters": 1000,
                     "x0": 0.2, "trace_every": 0},
    "users": {"count": 10, "seed": 3, "path_cap": 8},
    "outputs": {"dir": "elsewhere", "emit": ["metrics"]},
    "compare": {"models": ["BA", "DTVCN"], "nodes": [300, 400]}
  })");
  EXPECT_EQ(c.growth.n0, 4u);
  EXPECT_EQ(c.nodes, 300u);
  EXPECT_EQ(c.growth.model, GrowthModel::TVCN);
  EXPECT_EQ(c.growth.rng_seed, 9u);
  EXPECT_EQ(c.power_law_k_min(), 3u);
  EXPECT_EQ(c.capacity.kind, CapacityKind::BetweennessBased);
  EXPECT_FALSE(c.traffic.estimate);
  EXPECT_EQ(c.traffic.estimate_options.tie, TieBreak::SmallestId);
  EXPECT_EQ(c.traffic.estimate_options.steps.window, 400u);
  EXPECT_EQ(c.traffic.sweep, (std::vector<double>{0.5, 1.0}));
  EXPECT_DOUBLE_EQ(c.rate_control.price.omega, 1.5);
  EXPECT_EQ(c.rate_control.ode.max_iters, 1000u);
  EXPECT_EQ(c.users.path_cap, 8u);
  EXPECT_EQ(c.outputs.dir, "elsewhere");
  EXPECT_TRUE(c.outputs.wants("metrics"));
  EXPECT_FALSE(c.outputs.wants("graph"));
  EXPECT_EQ(c.compare.nodes, (std::vector<std::size_t>{300, 400}));
}

TEST(Config, RoundTripsThroughJson) {
  auto c = parse_config(R"({"growth": {"nodes": 700, "model": "BA", "seed": 5}, "users": {"count": 7}})");
  const auto text = config_to_json(c);
  const auto back = parse_config(text);
  EXPECT_EQ(config_to_json(back), text);
  EXPECT_EQ(back.nodes, 700u);
  EXPECT_EQ(back.growth.model, GrowthModel::BA);
}
