#pragma once

// Dense two-phase revised simplex for  min c.x  s.t.  A x = b, x >= 0.
// Sized for the convex-roof column generation: tens of rows, a few thousand columns.

#include <vector>

#include <Eigen/Dense>

namespace ac::detail {

struct LpSolution {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd x;  // primal, length = cols(A)
  Eigen::VectorXd y;  // duals of the equality rows: c - A^T y >= 0 at optimum
};

LpSolution solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace ac::detail
