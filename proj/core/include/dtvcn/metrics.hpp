#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtvcn/correlation.hpp"
#include "dtvcn/graph.hpp"

namespace dtvcn {

/// Exact betweenness g(i) over ordered (s, d) pairs with s != i != d,
/// unnormalized, fractional credit for multiple shortest paths. The same
/// convention feeds capacities, lambda_c and r_g.
std::vector<double> betweenness(const GraphSnapshot& g);

/// Mean local clustering coefficient; nodes with degree < 2 contribute 0.
double clustering_coefficient(const GraphSnapshot& g);

struct DistanceSummary {
  std::size_t diameter = 0;
  double apl = 0.0;            ///< mean over ordered connected pairs
  bool largest_component_only = false;
  std::size_t component_size = 0;
};

/// Exact all-pairs BFS. Disconnected graphs are measured on their largest
/// component and flagged.
DistanceSummary distances(const GraphSnapshot& g);

/// phi(k) = 2 E_{>k} / (N_{>k} (N_{>k} - 1)). Throws TooFewRichNodes.
double rich_club(const GraphSnapshot& g, std::size_t k);

/// Smallest k with N_{>k} <= max(2, ceil(0.05 N)).
std::size_t rich_club_threshold(const GraphSnapshot& g);

struct PowerLawFit {
  double alpha = 0.0;
  double stderr_alpha = 0.0;
  std::size_t samples = 0;
  std::size_t k_min = 0;
};

/// Continuous maximum-likelihood exponent with the discrete half-step
/// correction:  alpha = 1 + n / sum ln(k / (k_min - 1/2)) over k >= k_min.
PowerLawFit fit_power_law(std::span<const std::size_t> degrees, std::size_t k_min);

struct BcDegreeFit {
  double slope = 0.0;  ///< d log g / d log k
  double delta = 0.0;  ///< BC exponent from g ~ k^((alpha-1)/(delta-1))
  std::size_t classes = 0;
};

/// Least-squares slope of log(mean g) against log k over degree classes of
/// nodes with g > 0; needs at least 100 such nodes and two classes.
BcDegreeFit bc_degree_exponent(std::span<const std::size_t> degrees,
                               std::span<const double> betweenness, double alpha_fit);

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double clustering = 0.0;
  std::size_t diameter = 0;
  double apl = 0.0;
  bool largest_component_only = false;
  PowerLawFit alpha_fit;
  std::optional<double> rc;
  std::size_t k_star = 0;
  std::optional<BcDegreeFit> delta_fit;
  Correlation r_deg;
  Correlation r_g;
};

/// Everything above for one snapshot. `k_min` is the power-law cutoff.
MetricsReport compute_metrics(const GraphSnapshot& g, std::span<const double> betweenness,
                              std::size_t k_min);

/// Header of the comparison table.
inline constexpr const char* kMetricsCsvHeader = "N,model,clustering,diameter,apl,alpha,lambda_c,rc";

/// One row of the comparison table; NA where a value is undefined.
std::string metrics_csv_row(const MetricsReport& report, const std::string& model,
                            std::optional<double> lambda_c);

}  // namespace dtvcn
