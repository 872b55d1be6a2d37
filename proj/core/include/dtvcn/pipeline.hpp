#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dtvcn/config.hpp"
#include "dtvcn/correlation.hpp"
#include "dtvcn/flowcontrol.hpp"
#include "dtvcn/generator.hpp"
#include "dtvcn/metrics.hpp"
#include "dtvcn/traffic.hpp"

namespace dtvcn {

/// One configured experiment. Stages are computed on first use and cached;
/// each emit_* call writes the artifacts it owns that the config enables.
/// Module errors are rethrown with the stage named in the message.
class Experiment {
public:
  explicit Experiment(ExperimentConfig config);

  /// Analyze a recorded network instead of growing one.
  void use_event_log(EventLog log);

  const ExperimentConfig& config() const noexcept { return config_; }
  const GrowthResult& growth();
  const GraphSnapshot& graph() { return growth().final_graph; }
  const std::vector<double>& betweenness();
  const NodeScores& scores();
  const MetricsReport& metrics();
  const CriticalRate& lambda_c();
  const std::optional<CriticalRateEstimate>& lambda_c_estimate();
  const std::vector<SweepPoint>& sweep();
  const std::vector<UserSession>& users();
  const RoutingOutcome& rates();

  void emit_generate();  ///< graph.json, growth_trace.csv
  void emit_metrics();   ///< metrics.csv, node_scores.csv, andn.csv, fit_summary.csv
  void emit_traffic();   ///< lambda_sweep.csv, lambda_c.csv
  void emit_route();     ///< routing.csv, rate_trace.csv
  /// Every stage plus config.json.
  void run();

  /// Paths written so far, in order.
  const std::vector<std::filesystem::path>& written() const noexcept { return written_; }

private:
  template <typename Fn>
  void write(const std::string& artifact, const std::string& file, Fn&& body);

  ExperimentConfig config_;
  std::optional<GrowthResult> growth_;
  std::optional<std::vector<double>> betweenness_;
  std::optional<NodeScores> scores_;
  std::optional<MetricsReport> metrics_;
  std::optional<CriticalRate> lambda_c_;
  bool estimated_ = false;
  std::optional<CriticalRateEstimate> estimate_;
  std::optional<std::vector<SweepPoint>> sweep_;
  std::optional<std::vector<UserSession>> users_;
  std::optional<RoutingOutcome> rates_;
  std::vector<std::filesystem::path> written_;
};

/// "name,value" summary of the fits and correlations of a metrics report.
void write_fit_summary_csv(std::ostream& out, const MetricsReport& report,
                           std::span<const double> zeta, const GrowthParams& params);

struct ComparisonRow {
  std::size_t nodes = 0;
  GrowthModel model = GrowthModel::DTVCN;
  MetricsReport report;
  CriticalRate lambda_c;
};

/// One metrics row per (N, model) with M, beta, gamma and seed shared.
/// Throws TooFewModels for fewer than two models.
std::vector<ComparisonRow> compare_models(const ExperimentConfig& config);

/// Table with kMetricsCsvHeader.
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);

}  // namespace dtvcn
