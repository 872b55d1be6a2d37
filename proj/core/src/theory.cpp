#include "dtvcn/theory.hpp"

#include <cmath>
#include <string>

#include "dtvcn/error.hpp"

namespace dtvcn {

TheoryConstants theory_constants(double beta, double gamma, double zeta, double M) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidParams, "beta not in (0,1)");
  if (!(gamma > 0.5 && gamma < 1.0)) throw Error(ErrorCode::InvalidParams, "gamma not in (0.5,1)");
  if (!(zeta > 0.0 && zeta <= 1.0)) throw Error(ErrorCode::InvalidParams, "zeta not in (0,1]");

  TheoryConstants tc;
  tc.c = beta + (1.0 - beta) * (2.0 * gamma - 1.0);
  tc.K1 = (1.0 + zeta) / (2.0 * tc.c) * (beta + gamma * (1.0 - beta));
  tc.K2 = (2.0 * gamma - 2.0 + zeta) * (1.0 - beta) * M;
  tc.alpha = 1.0 + 1.0 / tc.K1;
  tc.exponent_in_range = tc.K1 > 0.5 && tc.K1 < 1.0;
  return tc;
}

double degree_trajectory(double K1, double K2, double M, double t_i, double t) {
  if (K1 == 0.0) throw Error(ErrorCode::NotApplicable, "K1 = 0");
  if (!(t_i > 0.0 && t >= t_i))
    throw Error(ErrorCode::InvalidParams,
                "need t >= t_i > 0, got t_i=" + std::to_string(t_i) + " t=" + std::to_string(t));
  const double shift = K2 / K1;
  return -shift + (M + shift) * std::pow(t / t_i, K1);
}

}  // namespace dtvcn
