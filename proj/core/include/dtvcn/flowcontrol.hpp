#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dtvcn/correlation.hpp"
#include "dtvcn/graph.hpp"

namespace dtvcn {

using Path = std::vector<NodeId>;

struct PathSet {
  std::vector<Path> paths;  ///< lexicographic order
  std::uint64_t count = 0;  ///< true number of shortest paths (saturating)
  bool truncated = false;   ///< count > paths.size()
};

/// Up to `cap` shortest s-d paths by depth-first search over the
/// shortest-path DAG, visiting neighbors in increasing id. Throws
/// Unreachable, InvalidNode, or InvalidParams when s == d.
PathSet enumerate_shortest_paths(const GraphSnapshot& g, NodeId s, NodeId d,
                                 std::size_t cap = 64);

struct PathScore {
  double wg = 0.0;
  bool undefined_used = false;  ///< some r_g(v) was undefined and counted as 1
};

/// W_g = sum over the path's nodes (endpoints included) of r_g(v) + 1.
PathScore path_score(std::span<const NodeId> path, std::span<const Correlation> r_g_local);

struct PathChoice {
  std::size_t min_index = 0;
  std::size_t max_index = 0;
};

/// argmin / argmax of the scores; ties go to the lexicographically first
/// path, which is the lowest index for enumerate_shortest_paths output.
PathChoice select_paths(std::span<const Path> paths, std::span<const double> scores);

/// psi(y) = c (y / C)^omega
struct LinkPriceModel {
  double c = 1.0;
  double C = 1.0;
  double omega = 2.0;
};

double link_price(const LinkPriceModel& model, double load);

/// One rate-controlled flow: the links it crosses and U(x) = a log(x + b).
struct Flow {
  std::vector<Edge> links;
  double a = 1.0;
  double b = 1.0;
  double theta = 1.0;
};

/// Links of a node path, canonicalized.
std::vector<Edge> path_links(std::span<const NodeId> path);

struct RateOptions {
  double dt = 0.01;
  double tol = 1e-6;
  std::size_t max_iters = 1'000'000;
  double x0 = 0.1;
  std::size_t trace_every = 0;  ///< 0: no trace
};

struct RateSample {
  std::size_t iter = 0;
  std::vector<double> x;
};

struct RateResult {
  std::vector<double> x;
  bool converged = false;
  std::size_t iterations = 0;
  double dt = 0.0;       ///< step actually used
  int restarts = 0;      ///< dt halvings after a non-finite state
  std::vector<RateSample> trace;
};

/// Explicit Euler on dx_r/dt = theta_r (P_r - x_r sum_{e in r} psi_e) with
/// P_r = x_r a_r / (x_r + b_r). All flows update from the same previous
/// state. Stops once max_r |dx_r/dt| < tol.
RateResult evolve_rates(std::span<const Flow> flows, const LinkPriceModel& price,
                        const RateOptions& options = {});

/// Residual max_r |P_r - x_r sum psi_e| at the given rates.
double equilibrium_residual(std::span<const Flow> flows, const LinkPriceModel& price,
                            std::span<const double> x);

struct OracleOptions {
  int starts = 8;
  double damping = 0.5;
  double tol = 1e-13;
  std::size_t max_iters = 100'000;
  std::uint64_t seed = 12345;
};

/// Independent equilibrium solver for small instances (<= 10 flows, <= 20
/// links): damped best-response iteration, each best response found by
/// bisection, from several random starts that must agree. Throws
/// NoFixedPointFound.
std::vector<double> system_oracle(std::span<const Flow> flows, const LinkPriceModel& price,
                                  const OracleOptions& options = {});

struct UserSession {
  NodeId source = 0;
  NodeId destination = 0;
  double a = 1.0;
  double b = 1.0;
  PathSet paths;
  std::vector<double> wg;
  PathChoice chosen;
  bool wg_undefined_used = false;
};

/// `count` distinct ordered pairs (s != d) of connected nodes with
/// a ~ U[1, 10] and b = 1. Throws InvalidParams if not enough pairs exist.
std::vector<UserSession> sample_users(const GraphSnapshot& g, std::size_t count,
                                      std::uint64_t seed);

/// Enumerates, scores and selects paths for every session (in parallel).
void plan_routes(const GraphSnapshot& g, std::span<const Correlation> r_g_local,
                 std::span<UserSession> users, std::size_t cap = 64);

struct RoutingOutcome {
  RateResult on_min;  ///< every user on its min-W_g path
  RateResult on_max;  ///< every user on its max-W_g path
};

RoutingOutcome route_rates(const GraphSnapshot& g, std::span<const UserSession> users,
                           const LinkPriceModel& price, const RateOptions& options = {});

/// "user,s,d,chi,wg_min,wg_max,xstar_min_path,xstar_max_path,converged"
void write_routing_csv(std::ostream& out, std::span<const UserSession> users,
                       const RoutingOutcome& outcome);
/// "iter,user,x"
void write_rate_trace_csv(std::ostream& out, std::span<const RateSample> trace);

}  // namespace dtvcn
