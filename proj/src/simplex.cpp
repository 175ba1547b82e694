#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ac::detail {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-12;

struct Tableau {
  Eigen::MatrixXd A;  // [A | I]
  Eigen::VectorXd b;
  std::vector<int> basis;
  int n_orig = 0;
  Eigen::MatrixXd Binv;
  Eigen::VectorXd xB;

  void refactor() {
    const Eigen::Index m = A.rows();
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A.col(basis[i]);
    Binv = B.partialPivLu().inverse();
    xB = Binv * b;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (xB(i) < 0.0 && xB(i) > -1e-9) xB(i) = 0.0;
    }
  }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cB(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) cB(i) = cost(basis[i]);
    return Binv.transpose() * cB;
  }

  // Returns false if the objective is unbounded.
  bool optimize(const Eigen::VectorXd& cost, bool artificials_may_enter) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    const int limit = 50 * static_cast<int>(n + m) + 1000;
    std::vector<char> in_basis(n, 0);
    for (int j : basis) in_basis[j] = 1;
    int degenerate_run = 0;
    for (int it = 0; it < limit; ++it) {
      refactor();
      const Eigen::VectorXd y = duals(cost);
      const Eigen::VectorXd d = cost - A.transpose() * y;
      const bool bland = degenerate_run > 50;
      int enter = -1;
      double best = -kCostTol * (1.0 + cost.cwiseAbs().maxCoeff());
      for (Eigen::Index j = 0; j < n; ++j) {
        if (in_basis[j] || (!artificials_may_enter && j >= n_orig)) continue;
        if (d(j) < best) {
          enter = static_cast<int>(j);
          if (bland) break;
          best = d(j);
        }
      }
      if (enter < 0) return true;
      const Eigen::VectorXd dir = Binv * A.col(enter);
      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (dir(i) <= kPivotTol) continue;
        const double ratio = xB(i) / dir(i);
        if (ratio < theta - 1e-14 || (ratio <= theta + 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
          theta = std::min(theta, ratio);
          leave = static_cast<int>(i);
        }
      }
      if (leave < 0) return false;
      degenerate_run = theta <= 1e-14 ? degenerate_run + 1 : 0;
      in_basis[basis[leave]] = 0;
      in_basis[enter] = 1;
      basis[leave] = enter;
    }
    refactor();
    return true;
  }
};

}  // namespace

LpSolution solve_lp(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in, const Eigen::VectorXd& c) {
  const Eigen::Index m = A_in.rows();
  const Eigen::Index n = A_in.cols();
  Tableau T;
  T.n_orig = static_cast<int>(n);
  T.A.resize(m, n + m);
  T.b = b_in;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b_in(i) < 0.0) sign(i) = -1.0;
  }
  T.A.leftCols(n) = sign.asDiagonal() * A_in;
  T.A.rightCols(m).setIdentity();
  T.b = sign.cwiseProduct(b_in);
  for (Eigen::Index i = 0; i < m; ++i) T.basis.push_back(static_cast<int>(n + i));

  LpSolution out;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  T.optimize(phase1, true);
  T.refactor();
  double infeasibility = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (T.basis[i] >= n) infeasibility += T.xB(i);
  }
  if (infeasibility > 1e-8 * (1.0 + T.b.cwiseAbs().sum())) return out;

  // Pivot zero-valued artificials out where a real column can replace them.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (T.basis[i] < n) continue;
    const Eigen::RowVectorXd row = T.Binv.row(i) * T.A.leftCols(n);
    Eigen::Index j;
    if (row.cwiseAbs().maxCoeff(&j) > 1e-9 &&
        std::find(T.basis.begin(), T.basis.end(), static_cast<int>(j)) == T.basis.end()) {
      T.basis[i] = static_cast<int>(j);
      T.refactor();
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.head(n) = c;
  if (!T.optimize(cost, false)) return out;
  T.refactor();

  out.feasible = true;
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (T.basis[i] < n) out.x(T.basis[i]) = std::max(T.xB(i), 0.0);
  }
  out.value = c.dot(out.x);
  out.y = sign.cwiseProduct(T.duals(cost));
  return out;
}

}  // namespace ac::detail
