#pragma once

#include <Eigen/Dense>

#include "hoproute/errors.hpp"

namespace hoproute {

// min objective . x  subject to  eq_lhs x = eq_rhs,  le_lhs x <= le_rhs,  x >= 0
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd le_lhs;
  Eigen::VectorXd le_rhs;
};

struct LpSolution {
  bool feasible = false;
  bool bounded = true;
  double value = 0.0;
  Eigen::VectorXd x;
  // Duals y such that value = eq_dual . eq_rhs + le_dual . le_rhs and
  // eq_dual^T eq_lhs + le_dual^T le_lhs <= objective^T, le_dual <= 0.
  Eigen::VectorXd eq_dual;
  Eigen::VectorXd le_dual;
};

// Dense two-phase tableau simplex with Bland's rule. Deterministic.
LpSolution solve_lp(const LpProblem& lp);

}  // namespace hoproute
