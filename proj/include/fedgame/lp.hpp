#ifndef FEDGAME_LP_HPP
#define FEDGAME_LP_HPP

#include "fedgame/types.hpp"

#include <vector>

namespace fedgame {

enum class Sense { kGreaterEqual, kEqual, kLessEqual };

/// min c^T x  s.t.  A_r x (sense_r) b_r,  x >= lower.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  std::vector<Sense> senses;
  Eigen::VectorXd b;
  Eigen::VectorXd lower;  // empty means all zero
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

/// Result of solve_lp().
///
/// For an optimal solution `y` holds one multiplier per constraint row with
/// the usual sign convention for a minimization (y_r >= 0 on >= rows,
/// y_r <= 0 on <= rows, free on = rows) and `dual_objective` is
/// b^T y + (c - A^T y)^T lower. For an infeasible problem `ray` is a Farkas
/// multiplier over the rows (same sign convention, y^T A <= 0 on every
/// column, y^T (b - A lower) > 0); for an unbounded one it is a primal
/// direction d >= 0 with A d (sense) 0 and c^T d < 0.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd y;
  double dual_objective = 0.0;
  Eigen::VectorXd ray;
  int iterations = 0;
};

struct LpTolerances {
  static constexpr double kPivot = 1e-10;
  static constexpr double kFeasibility = 1e-8;
  static constexpr double kOptimality = 1e-9;
};

/// Two-phase primal revised simplex with Bland's rule. The basis is
/// refactorized with partial pivoting at every iteration. Throws SolverError
/// on malformed input or when the iteration limit is hit.
LpSolution solve_lp(const LpProblem& problem);

/// max |residual| of the primal constraints and bounds at x.
double primal_infeasibility(const LpProblem& problem, const Eigen::VectorXd& x);
/// max violation of the dual sign conditions and reduced-cost signs at y.
double dual_infeasibility(const LpProblem& problem, const Eigen::VectorXd& y);

}  // namespace fedgame

#endif  // FEDGAME_LP_HPP
