#include "dtvcn/pipeline.hpp"

#include <fstream>
#include <ostream>

#include "dtvcn/error.hpp"
#include "dtvcn/graph_io.hpp"
#include "dtvcn/theory.hpp"
#include "format.hpp"

namespace dtvcn {

namespace {

template <typename Fn>
decltype(auto) staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage ") + stage + ": " + e.message());
  }
}

}  // namespace

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
}

void Experiment::use_event_log(EventLog log) {
  *this = Experiment(config_);
  GrowthResult r;
  r.final_graph = replay(log, log.last_time());
  r.log = std::move(log);
  growth_ = std::move(r);
}

const GrowthResult& Experiment::growth() {
  if (!growth_) growth_ = staged("generate", [&] { return grow(config_.growth_params(config_.nodes)); });
  return *growth_;
}

const std::vector<double>& Experiment::betweenness() {
  if (!betweenness_) {
    const auto& g = graph();
    betweenness_ = staged("metrics", [&] { return dtvcn::betweenness(g); });
  }
  return *betweenness_;
}

const NodeScores& Experiment::scores() {
  if (!scores_) {
    const auto& g = graph();
    const auto& bc = betweenness();
    scores_ = staged("metrics", [&] {
      NodeScores s = compute_node_scores(g, bc);
      s.capacity = capacities(g, config_.capacity, bc);
      return s;
    });
  }
  return *scores_;
}

const MetricsReport& Experiment::metrics() {
  if (!metrics_) {
    const auto& g = graph();
    const auto& bc = betweenness();
    metrics_ = staged("metrics", [&] { return compute_metrics(g, bc, config_.power_law_k_min()); });
  }
  return *metrics_;
}

const CriticalRate& Experiment::lambda_c() {
  if (!lambda_c_) {
    const auto& g = graph();
    const auto& bc = betweenness();
    lambda_c_ = staged("traffic", [&] { return lambda_c_theoretical(g, config_.capacity, bc); });
  }
  return *lambda_c_;
}

const std::optional<CriticalRateEstimate>& Experiment::lambda_c_estimate() {
  if (!estimated_) {
    estimated_ = true;
    if (config_.traffic.estimate) {
      const auto& g = graph();
      const auto& bc = betweenness();
      estimate_ = staged("traffic", [&] {
        return estimate_lambda_c(g, config_.capacity, bc, config_.traffic.seed,
                                 config_.traffic.estimate_options);
      });
    }
  }
  return estimate_;
}

const std::vector<SweepPoint>& Experiment::sweep() {
  if (!sweep_) {
    const auto& theory = lambda_c();
    const auto& s = scores();
    sweep_ = staged("traffic", [&] {
      std::vector<SweepPoint> out;
      if (theory.no_bottleneck) return out;
      std::vector<double> lambdas;
      for (double m : config_.traffic.sweep) lambdas.push_back(m * theory.value);
      return sweep_lambda(graph(), s.capacity, lambdas, config_.traffic.seed,
                          config_.traffic.estimate_options.steps,
                          config_.traffic.estimate_options.tie);
    });
  }
  return *sweep_;
}

const std::vector<UserSession>& Experiment::users() {
  if (!users_) {
    const auto& g = graph();
    const auto& s = scores();
    users_ = staged("route", [&] {
      auto u = sample_users(g, config_.users.count, config_.users.seed);
      plan_routes(g, s.r_g_local, u, config_.users.path_cap);
      return u;
    });
  }
  return *users_;
}

const RoutingOutcome& Experiment::rates() {
  if (!rates_) {
    const auto& u = users();
    rates_ = staged("route", [&] {
      return route_rates(graph(), u, config_.rate_control.price, config_.rate_control.ode);
    });
  }
  return *rates_;
}

template <typename Fn>
void Experiment::write(const std::string& artifact, const std::string& file, Fn&& body) {
  if (!config_.outputs.wants(artifact)) return;
  std::error_code ec;
  std::filesystem::create_directories(config_.outputs.dir, ec);
  const auto path = config_.outputs.dir / file;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
  written_.push_back(path);
}

void Experiment::emit_generate() {
  const auto& r = growth();
  write("graph", "graph.json", [&](std::ostream& o) { o << to_json(r.log); });
  if (!r.trace.empty())
    write("growth_trace", "growth_trace.csv",
          [&](std::ostream& o) { write_growth_trace_csv(o, r.trace); });
}

void Experiment::emit_metrics() {
  const auto& m = metrics();
  const auto& s = scores();
  const auto& theory = lambda_c();
  write("metrics", "metrics.csv", [&](std::ostream& o) {
    o << kMetricsCsvHeader << '\n'
      << metrics_csv_row(m, std::string(to_string(config_.growth.model)),
                         theory.no_bottleneck ? std::nullopt : std::optional(theory.value))
      << '\n';
  });
  write("node_scores", "node_scores.csv", [&](std::ostream& o) { write_node_scores_csv(o, s); });
  write("andn", "andn.csv", [&](std::ostream& o) { write_andn_csv(o, andn(graph())); });
  write("fit_summary", "fit_summary.csv", [&](std::ostream& o) {
    write_fit_summary_csv(o, m, s.zeta, config_.growth_params(config_.nodes));
  });
}

void Experiment::emit_traffic() {
  if (config_.outputs.wants("lambda_sweep")) {
    const auto& points = sweep();
    write("lambda_sweep", "lambda_sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, points); });
  }
  if (config_.outputs.wants("lambda_c")) {
    const auto& theory = lambda_c();
    const auto& est = lambda_c_estimate();
    write("lambda_c", "lambda_c.csv", [&](std::ostream& o) { write_lambda_c_csv(o, theory, est); });
  }
}

void Experiment::emit_route() {
  if (!config_.outputs.wants("routing") && !config_.outputs.wants("rate_trace")) return;
  const auto& u = users();
  const auto& r = rates();
  write("routing", "routing.csv", [&](std::ostream& o) { write_routing_csv(o, u, r); });
  write("rate_trace", "rate_trace.csv",
        [&](std::ostream& o) { write_rate_trace_csv(o, r.on_min.trace); });
}

void Experiment::run() {
  emit_generate();
  emit_metrics();
  emit_traffic();
  emit_route();
  std::error_code ec;
  std::filesystem::create_directories(config_.outputs.dir, ec);
  const auto path = config_.outputs.dir / "config.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << config_to_json(config_);
  written_.push_back(path);
}

void write_fit_summary_csv(std::ostream& out, const MetricsReport& m, std::span<const double> zeta,
                           const GrowthParams& params) {
  using detail::fmt;
  out << "name,value\n";
  out << "nodes," << m.nodes << '\n' << "edges," << m.edges << '\n';
  out << "alpha," << fmt(m.alpha_fit.alpha) << '\n';
  out << "alpha_stderr," << fmt(m.alpha_fit.stderr_alpha) << '\n';
  out << "alpha_samples," << m.alpha_fit.samples << '\n';
  out << "k_min," << m.alpha_fit.k_min << '\n';
  out << "bc_slope," << (m.delta_fit ? fmt(m.delta_fit->slope) : "NA") << '\n';
  out << "delta," << (m.delta_fit ? fmt(m.delta_fit->delta) : "NA") << '\n';
  out << "r_deg," << fmt(m.r_deg) << '\n';
  out << "r_g," << fmt(m.r_g) << '\n';
  out << "rc," << fmt(m.rc) << '\n';
  out << "k_star," << m.k_star << '\n';
  double mean_zeta = 0.0;
  std::size_t linked = 0;
  for (double z : zeta)
    if (z > 0.0) {
      mean_zeta += z;
      ++linked;
    }
  if (linked) mean_zeta /= static_cast<double>(linked);
  out << "mean_zeta," << fmt(mean_zeta) << '\n';
  std::string theory_alpha = "NA";
  if (params.model == GrowthModel::DTVCN && mean_zeta > 0.0) {
    try {
      theory_alpha = fmt(theory_constants(params.beta, params.gamma, mean_zeta,
                                          static_cast<double>(params.M))
                             .alpha);
    } catch (const Error&) {
    }
  }
  out << "theory_alpha_at_mean_zeta," << theory_alpha << '\n';
}

std::vector<ComparisonRow> compare_models(const ExperimentConfig& config) {
  config.validate();
  if (config.compare.models.size() < 2)
    throw Error(ErrorCode::TooFewModels, "need at least two models to compare");
  std::vector<std::size_t> sizes = config.compare.nodes;
  if (sizes.empty()) sizes.push_back(config.nodes);

  std::vector<ComparisonRow> rows;
  for (std::size_t n : sizes) {
    for (GrowthModel model : config.compare.models) {
      ExperimentConfig cell = config;
      cell.nodes = n;
      cell.growth.model = model;
      Experiment e(cell);
      rows.push_back({n, model, e.metrics(), e.lambda_c()});
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << kMetricsCsvHeader << '\n';
  for (const ComparisonRow& r : rows)
    out << metrics_csv_row(r.report, std::string(to_string(r.model)),
                           r.lambda_c.no_bottleneck ? std::nullopt : std::optional(r.lambda_c.value))
        << '\n';
}

}  // namespace dtvcn
