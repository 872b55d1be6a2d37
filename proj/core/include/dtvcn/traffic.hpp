#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dtvcn/graph.hpp"

namespace dtvcn {

enum class CapacityKind { DegreeBased, BetweennessBased };

/// Packet forwarding capacity per node:
///   DegreeBased:      C_i = 1 + floor(cap_beta * k_i)
///   BetweennessBased: C_i = 1 + floor(cap_beta * g(i) / N)
struct CapacityModel {
  CapacityKind kind = CapacityKind::DegreeBased;
  double cap_beta = 0.5;
};

/// `betweenness` may be empty for DegreeBased.
std::vector<int> capacities(const GraphSnapshot& g, const CapacityModel& model,
                            std::span<const double> betweenness);

struct CriticalRate {
  double value = 0.0;           ///< +inf when there is no bottleneck
  bool no_bottleneck = false;   ///< every betweenness is zero
  NodeId bottleneck = 0;
};

/// lambda_c = C_L (N - 1) / g(L) at the node L of maximum betweenness
/// (ties broken by larger capacity, then smaller id).
CriticalRate lambda_c_theoretical(const GraphSnapshot& g, const CapacityModel& model,
                                  std::span<const double> betweenness);

/// How a node picks among several next hops on shortest routes.
///   PathCount:  a fixed pseudo-random pick per (node, destination), weighted
///               by the number of shortest paths through each candidate. The
///               expected routed load of every node is then its betweenness.
///   SmallestId: the smallest neighbor id. Funnels ties through low ids.
enum class TieBreak { PathCount, SmallestId };

/// Fixed single shortest-path next hops.
class RoutingTable {
public:
  explicit RoutingTable(const GraphSnapshot& g, TieBreak tie = TieBreak::PathCount,
                        std::uint64_t salt = 0);

  /// Next node on the route from `at` toward `dest`; `dest` itself when
  /// adjacent. Undefined for unreachable pairs or at == dest.
  NodeId next_hop(NodeId at, NodeId dest) const { return next_[std::size_t(at) * n_ + dest]; }
  std::size_t node_count() const noexcept { return n_; }
  bool reachable(NodeId from, NodeId dest) const {
    return next_[std::size_t(from) * n_ + dest] != kNone;
  }

private:
  static constexpr NodeId kNone = static_cast<NodeId>(-1);
  std::size_t n_ = 0;
  std::vector<NodeId> next_;
};

struct TrafficSteps {
  std::size_t warmup = 500;
  std::size_t window = 2000;
};

struct TrafficRun {
  double lambda = 0.0;
  TrafficSteps steps;
  std::vector<std::uint64_t> num_packets;  ///< queued packets after each step
  std::vector<std::uint64_t> final_queue;  ///< per node at the end
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
};

/// Discrete-time packet process on fixed shortest routes.
///
/// Each step every node makes ceil(lambda) Bernoulli draws with probability
/// lambda / ceil(lambda), so it creates lambda packets on average; each
/// packet gets a uniform destination among the other nodes and is handed to
/// its first hop at once. Then every node forwards up to C_i packets from the
/// head of its FIFO queue; a packet reaching its destination leaves the
/// system. Only transit packets queue, which is the load the lambda_c
/// formula counts.
TrafficRun simulate(const GraphSnapshot& g, const RoutingTable& routes,
                    std::span<const int> capacity, double lambda, std::uint64_t seed,
                    TrafficSteps steps);

struct OrderParameter {
  double zeta = 0.0;   ///< clamped below at 0
  double slope = 0.0;  ///< least-squares slope of Num_p over the window
};

/// zeta = C / (lambda N) * slope, with lambda N the aggregate generation
/// rate and C the network capacity. Throws WindowTooShort below 100 steps.
OrderParameter order_parameter(const TrafficRun& run, double network_capacity,
                               std::size_t node_count);

struct EstimateOptions {
  double epsilon = 0.05;
  int rounds = 8;
  int seeds = 3;
  TieBreak tie = TieBreak::PathCount;
  double lambda_max = 0.0;  ///< 0: twice the theoretical value
  TrafficSteps steps;
};

struct CriticalRateEstimate {
  double value = 0.0;
  bool no_transition = false;  ///< zeta <= epsilon up to lambda_max
  double lambda_max = 0.0;
};

/// Bisection on lambda for the smallest rate whose seed-averaged zeta
/// exceeds epsilon.
CriticalRateEstimate estimate_lambda_c(const GraphSnapshot& g, const CapacityModel& model,
                                       std::span<const double> betweenness, std::uint64_t seed,
                                       const EstimateOptions& options = {});

struct SweepPoint {
  double lambda = 0.0;
  OrderParameter order;
  std::uint64_t delivered = 0;
  std::uint64_t generated = 0;
};

/// Runs one simulation per lambda (in parallel) with a fixed seed.
std::vector<SweepPoint> sweep_lambda(const GraphSnapshot& g, std::span<const int> capacity,
                                     std::span<const double> lambdas, std::uint64_t seed,
                                     TrafficSteps steps, TieBreak tie = TieBreak::PathCount);

/// "lambda,zeta,slope,delivered,generated"
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
/// "lambda_c_theoretical,lambda_c_estimated"
void write_lambda_c_csv(std::ostream& out, const CriticalRate& theory,
                        const std::optional<CriticalRateEstimate>& estimate);

}  // namespace dtvcn
