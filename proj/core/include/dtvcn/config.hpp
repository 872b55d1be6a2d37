#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dtvcn/flowcontrol.hpp"
#include "dtvcn/generator.hpp"
#include "dtvcn/traffic.hpp"

namespace dtvcn {

struct TrafficConfig {
  bool estimate = true;
  std::uint64_t seed = 11;
  EstimateOptions estimate_options;
  /// Sweep points as multiples of the theoretical lambda_c.
  std::vector<double> sweep = {0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0};
};

struct RateControlConfig {
  LinkPriceModel price;
  RateOptions ode{.dt = 0.01, .tol = 1e-6, .max_iters = 1'000'000, .x0 = 0.1, .trace_every = 100};
};

struct UsersConfig {
  std::size_t count = 100;
  std::uint64_t seed = 7;
  std::size_t path_cap = 64;
};

/// Every artifact the pipeline can write.
inline const std::vector<std::string> kArtifactNames = {
    "graph",    "growth_trace", "metrics",  "node_scores", "andn",
    "lambda_sweep", "lambda_c", "routing", "rate_trace",  "fit_summary"};

struct OutputConfig {
  std::filesystem::path dir = "out";
  std::vector<std::string> emit = kArtifactNames;

  bool wants(const std::string& name) const;
};

struct CompareConfig {
  std::vector<GrowthModel> models = {GrowthModel::BA, GrowthModel::TVCN, GrowthModel::DTVCN};
  std::vector<std::size_t> nodes;  ///< empty: the growth node count
};

struct ExperimentConfig {
  GrowthParams growth;          ///< growth.T is derived from `nodes`
  std::size_t nodes = 2000;     ///< final network size, n0 + T
  std::size_t k_min = 0;        ///< power-law cutoff; 0 means f_add
  CapacityModel capacity;
  TrafficConfig traffic;
  RateControlConfig rate_control;
  UsersConfig users;
  OutputConfig outputs;
  CompareConfig compare;

  /// Throws ConfigInvalid naming the field path, e.g. "growth.gamma".
  void validate() const;
  /// Growth parameters with T set from `nodes`.
  GrowthParams growth_params(std::size_t node_count) const;
  std::size_t power_law_k_min() const;
};

/// Parses a JSON config; absent fields keep their defaults, unknown fields
/// are rejected. Throws ConfigInvalid (with field path) or Parse.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The effective config as JSON, written next to the outputs.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace dtvcn
