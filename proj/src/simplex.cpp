#include "hoproute/simplex.hpp"

#include <cmath>
#include <vector>

namespace hoproute {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
  Eigen::MatrixXd t;          // rows x (cols + 1), last column is rhs
  std::vector<int> basis;     // basic column per row
  int cols;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Bland's rule; returns true when optimal, throws on iteration blowup.
  bool optimize(const Eigen::VectorXd& cost, int max_enter_col, bool* bounded) {
    const int r = static_cast<int>(t.rows());
    *bounded = true;
    for (long iter = 0;; ++iter) {
      if (iter > 1000L * (r + cols)) throw SolverFailure("simplex iteration cap hit");
      Eigen::VectorXd cb(r);
      for (int i = 0; i < r; ++i) cb[i] = cost[basis[static_cast<std::size_t>(i)]];
      int enter = -1;
      for (int j = 0; j < max_enter_col; ++j) {
        double rc = cost[j] - cb.dot(t.col(j));
        if (rc < -kTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < r; ++i) {
        double a = t(i, enter);
        if (a > kTol) {
          double ratio = t(i, cols) / a;
          if (leave < 0 || ratio < best - kTol ||
              (ratio < best + kTol &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) {
        *bounded = false;
        return false;
      }
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp) {
  const int n = static_cast<int>(lp.objective.size());
  const int re = static_cast<int>(lp.eq_rhs.size());
  const int rl = static_cast<int>(lp.le_rhs.size());
  const int r = re + rl;
  const int cols = n + rl + r;  // x, slacks, artificials

  Tableau tab;
  tab.cols = cols;
  tab.t = Eigen::MatrixXd::Zero(r, cols + 1);
  std::vector<double> row_sign(static_cast<std::size_t>(r), 1.0);
  for (int i = 0; i < r; ++i) {
    Eigen::RowVectorXd a(n);
    double b;
    if (i < re) {
      a = lp.eq_lhs.row(i);
      b = lp.eq_rhs[i];
    } else {
      a = lp.le_lhs.row(i - re);
      b = lp.le_rhs[i - re];
    }
    double sign = b < 0.0 ? -1.0 : 1.0;
    row_sign[static_cast<std::size_t>(i)] = sign;
    tab.t.block(i, 0, 1, n) = sign * a;
    if (i >= re) tab.t(i, n + (i - re)) = sign;  // slack
    tab.t(i, n + rl + i) = 1.0;                  // artificial
    tab.t(i, cols) = sign * b;
    tab.basis.push_back(n + rl + i);
  }

  LpSolution sol;

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(cols);
  c1.tail(r).setOnes();
  bool bounded = true;
  tab.optimize(c1, cols, &bounded);
  double phase1 = 0.0;
  for (int i = 0; i < r; ++i)
    if (tab.basis[static_cast<std::size_t>(i)] >= n + rl) phase1 += tab.t(i, cols);
  if (phase1 > 1e-7) {
    sol.feasible = false;
    return sol;
  }
  // Pivot remaining artificials out of the basis where possible.
  for (int i = 0; i < r; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n + rl) continue;
    for (int j = 0; j < n + rl; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-7) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2: original objective; artificial columns may not re-enter.
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(cols);
  c2.head(n) = lp.objective;
  if (!tab.optimize(c2, n + rl, &bounded)) {
    sol.feasible = true;
    sol.bounded = false;
    return sol;
  }

  sol.feasible = true;
  sol.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < r; ++i) {
    int b = tab.basis[static_cast<std::size_t>(i)];
    if (b < n) sol.x[b] = tab.t(i, cols);
  }
  sol.value = lp.objective.dot(sol.x);

  // Duals: y_i = c_B . (B^-1 e_i) = c_B . artificial column i, undoing row flips.
  Eigen::VectorXd cb(r);
  for (int i = 0; i < r; ++i) cb[i] = c2[tab.basis[static_cast<std::size_t>(i)]];
  sol.eq_dual.resize(re);
  sol.le_dual.resize(rl);
  for (int i = 0; i < r; ++i) {
    double y = row_sign[static_cast<std::size_t>(i)] * cb.dot(tab.t.col(n + rl + i));
    if (i < re)
      sol.eq_dual[i] = y;
    else
      sol.le_dual[i - re] = std::min(0.0, y);
  }
  return sol;
}

}  // namespace hoproute
