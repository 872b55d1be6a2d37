#pragma once

namespace dtvcn {

/// Mean-field constants of the degree growth law dk/dt = K1 k/t + K2/t.
struct TheoryConstants {
  double c = 0.0;      ///< beta + (1 - beta)(2 gamma - 1)
  double K1 = 0.0;     ///< (1 + zeta)/(2c) (beta + gamma (1 - beta))
  double K2 = 0.0;     ///< (2 gamma - 2 + zeta)(1 - beta) M
  double alpha = 0.0;  ///< 1 + 1/K1
  bool exponent_in_range = false;  ///< 0.5 < K1 < 1, i.e. 2 < alpha < 3
};

/// Total on beta in (0,1), gamma in (0.5,1), zeta in (0,1]; throws
/// InvalidParams outside that domain.
TheoryConstants theory_constants(double beta, double gamma, double zeta, double M);

/// Expected degree at time t of a node that arrived at t_i with M links:
///   -K2/K1 + (M + K2/K1) (t/t_i)^K1
/// Throws NotApplicable when K1 == 0 and InvalidParams unless t >= t_i > 0.
double degree_trajectory(double K1, double K2, double M, double t_i, double t);

}  // namespace dtvcn
