// dtvcn: grow networks, measure them, and run the traffic and rate-control
// experiments from the command line.

#include <CLI11.hpp>

#include <dtvcn/error.hpp>
#include <dtvcn/graph_io.hpp>
#include <dtvcn/pipeline.hpp>
#include <dtvcn/theory.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::size_t> nodes;
  std::optional<std::string> model;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<std::size_t> m;
  std::optional<std::size_t> users;
  std::optional<std::string> out;
};

dtvcn::ExperimentConfig resolve(const Overrides& o) {
  dtvcn::ExperimentConfig c =
      o.config_path.empty() ? dtvcn::ExperimentConfig{} : dtvcn::load_config(o.config_path);
  if (o.nodes) c.nodes = *o.nodes;
  if (o.model) {
    try {
      c.growth.model = dtvcn::parse_growth_model(*o.model);
    } catch (const dtvcn::Error&) {
      throw dtvcn::Error(dtvcn::ErrorCode::ConfigInvalid, "growth.model: unknown model '" + *o.model + "'");
    }
  }
  if (o.seed) c.growth.rng_seed = *o.seed;
  if (o.beta) c.growth.beta = *o.beta;
  if (o.gamma) c.growth.gamma = *o.gamma;
  if (o.m) c.growth.M = *o.m;
  if (o.users) c.users.count = *o.users;
  if (o.out) c.outputs.dir = *o.out;
  c.validate();
  return c;
}

void report(const dtvcn::Experiment& e) {
  for (const auto& p : e.written()) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying communication network experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--nodes", o.nodes, "final network size");
  app.add_option("--model", o.model, "BA, TVCN or DTVCN");
  app.add_option("--seed", o.seed, "growth RNG seed");
  app.add_option("--beta", o.beta, "fraction of links added per step");
  app.add_option("--gamma", o.gamma, "rewire share of the remaining links");
  app.add_option("--m", o.m, "links per step (M)");
  app.add_option("--users", o.users, "number of (s,d) users");
  app.add_option("--out", o.out, "output directory");

  std::string graph_path;
  auto with_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_path, "analyze a saved event log instead of growing")
        ->check(CLI::ExistingFile);
  };

  auto* generate = app.add_subcommand("generate", "grow a network; writes graph.json and growth_trace.csv");
  auto* metrics = app.add_subcommand("metrics", "structural metrics, node scores and fits");
  with_graph(metrics);
  auto* traffic = app.add_subcommand("traffic", "lambda sweep and critical rate");
  with_graph(traffic);
  bool no_estimate = false;
  traffic->add_flag("--no-estimate", no_estimate, "skip the simulated lambda_c bisection");
  auto* route = app.add_subcommand("route", "path selection and rate control for sampled users");
  with_graph(route);

  auto* theory = app.add_subcommand("theory", "mean-field constants and exponent");
  double zeta = 0.3333;
  theory->add_option("--zeta", zeta, "disassortativity factor");

  auto* compare = app.add_subcommand("compare", "one metrics row per (N, model)");
  std::vector<std::string> models;
  std::vector<std::size_t> sizes;
  compare->add_option("--models", models, "models to compare")->delimiter(',');
  compare->add_option("--sizes", sizes, "network sizes")->delimiter(',');

  auto* run = app.add_subcommand("run", "the whole pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  dtvcn::ExperimentConfig config;
  try {
    config = resolve(o);
    if (!models.empty()) {
      config.compare.models.clear();
      for (const auto& m : models) {
        try {
          config.compare.models.push_back(dtvcn::parse_growth_model(m));
        } catch (const dtvcn::Error&) {
          throw dtvcn::Error(dtvcn::ErrorCode::ConfigInvalid, "compare.models: unknown model '" + m + "'");
        }
      }
    }
    if (!sizes.empty()) config.compare.nodes = sizes;
    if (no_estimate) config.traffic.estimate = false;
    config.validate();
  } catch (const dtvcn::Error& e) {
    std::cerr << "dtvcn: " << e.what() << '\n';
    return e.code() == dtvcn::ErrorCode::Io ? kRuntimeError : kConfigError;
  }

  try {
    dtvcn::Experiment exp(config);
    if (!graph_path.empty()) exp.use_event_log(dtvcn::load_event_log(graph_path));

    if (*generate) {
      exp.emit_generate();
    } else if (*metrics) {
      exp.emit_metrics();
    } else if (*traffic) {
      exp.emit_traffic();
    } else if (*route) {
      exp.emit_route();
    } else if (*theory) {
      const auto t = dtvcn::theory_constants(config.growth.beta, config.growth.gamma, zeta,
                                             static_cast<double>(config.growth.M));
      std::printf("c,K1,K2,alpha,exponent_in_range\n%.10g,%.10g,%.10g,%.10g,%d\n", t.c, t.K1, t.K2,
                  t.alpha, t.exponent_in_range ? 1 : 0);
      return 0;
    } else if (*compare) {
      const auto rows = dtvcn::compare_models(config);
      std::filesystem::create_directories(config.outputs.dir);
      const auto path = config.outputs.dir / "comparison.csv";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw dtvcn::Error(dtvcn::ErrorCode::Io, "cannot write " + path.string());
      std::ostringstream table;
      dtvcn::write_comparison_csv(table, rows);
      out << table.str();
      std::cout << table.str();
      return 0;
    } else if (*run) {
      exp.run();
    }
    report(exp);
  } catch (const dtvcn::Error& e) {
    std::cerr << "dtvcn: " << e.what() << '\n';
    const bool config_error = e.code() == dtvcn::ErrorCode::ConfigInvalid ||
                              e.code() == dtvcn::ErrorCode::InvalidParams ||
                              e.code() == dtvcn::ErrorCode::TooFewModels;
    return config_error ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "dtvcn: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
