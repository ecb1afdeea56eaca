#include "fedgame/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fedgame {

namespace {

// Problem rewritten as  min cost^T z  s.t.  M z = rhs, z >= 0, rhs >= 0.
struct StandardForm {
  Eigen::MatrixXd M;
  Eigen::VectorXd rhs;
  Eigen::VectorXd row_sign;  // +1 or -1 applied to each original row
  Eigen::Index structural = 0;
  Eigen::Index first_artificial = 0;
  std::vector<Eigen::Index> basis;
};

StandardForm standardize(const LpProblem& p, const Eigen::VectorXd& lower) {
  const Eigen::Index m = p.A.rows();
  const Eigen::Index n = p.A.cols();
  StandardForm sf;
  sf.structural = n;
  sf.row_sign = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd rhs = p.b - p.A * lower;
  std::vector<Sense> senses = p.senses;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (rhs(r) < 0.0) {
      sf.row_sign(r) = -1.0;
      rhs(r) = -rhs(r);
      if (senses[r] == Sense::kGreaterEqual) {
        senses[r] = Sense::kLessEqual;
      } else if (senses[r] == Sense::kLessEqual) {
        senses[r] = Sense::kGreaterEqual;
      }
    }
  }
  Eigen::Index slacks = 0;
  Eigen::Index artificials = 0;
  for (auto s : senses) {
    if (s != Sense::kEqual) ++slacks;
    if (s != Sense::kLessEqual) ++artificials;
  }
  sf.first_artificial = n + slacks;
  sf.M = Eigen::MatrixXd::Zero(m, n + slacks + artificials);
  sf.M.leftCols(n) = sf.row_sign.asDiagonal() * p.A;
  sf.rhs = rhs;
  sf.basis.assign(static_cast<std::size_t>(m), -1);
  Eigen::Index slack_col = n;
  Eigen::Index art_col = sf.first_artificial;
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto s = senses[static_cast<std::size_t>(r)];
    if (s == Sense::kLessEqual) {
      sf.M(r, slack_col) = 1.0;
      sf.basis[static_cast<std::size_t>(r)] = slack_col++;
    } else {
      if (s == Sense::kGreaterEqual) sf.M(r, slack_col++) = -1.0;
      sf.M(r, art_col) = 1.0;
      sf.basis[static_cast<std::size_t>(r)] = art_col++;
    }
  }
  return sf;
}

enum class PhaseResult { kOptimal, kUnbounded };

class RevisedSimplex {
 public:
  RevisedSimplex(StandardForm& sf, int iteration_limit)
      : sf_(sf), limit_(iteration_limit) {}

  PhaseResult run(const Eigen::VectorXd& cost, Eigen::Index allowed_columns) {
    const Eigen::Index m = sf_.M.rows();
    while (true) {
      refactor();
      const Eigen::VectorXd xb = basic_values();
      const Eigen::VectorXd y = duals(cost);
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < allowed_columns; ++j) {
        if (is_basic(j)) continue;
        const double reduced = cost(j) - y.dot(sf_.M.col(j));
        if (reduced < -LpTolerances::kOptimality) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return PhaseResult::kOptimal;

      const Eigen::VectorXd u = lu_.solve(sf_.M.col(entering));
      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (u(i) <= LpTolerances::kPivot) continue;
        const double ratio = std::max(0.0, xb(i)) / u(i);
        const double slack = 1e-12 * (1.0 + std::abs(best_ratio));
        if (leave < 0 || ratio < best_ratio - slack) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio <= best_ratio + slack && basis(i) < basis(leave)) {
          leave = i;  // Bland: lowest-index leaving variable among ties
        }
      }
      if (leave < 0) {
        ray_ = Eigen::VectorXd::Zero(sf_.M.cols());
        ray_(entering) = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) ray_(basis(i)) = -u(i);
        return PhaseResult::kUnbounded;
      }
      sf_.basis[static_cast<std::size_t>(leave)] = entering;
      if (++iterations_ > limit_) {
        throw SolverError("simplex: iteration limit reached (" + std::to_string(limit_) + ")");
      }
    }
  }

  // Pivots zero-valued artificials out of the basis where a non-artificial
  // column can replace them; rows where none can are redundant.
  void drive_out_artificials() {
    const Eigen::Index m = sf_.M.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basis(i) < sf_.first_artificial) continue;
      refactor();
      const Eigen::VectorXd rho = lu_.transpose().solve(Eigen::VectorXd::Unit(m, i));
      for (Eigen::Index j = 0; j < sf_.first_artificial; ++j) {
        if (is_basic(j)) continue;
        if (std::abs(rho.dot(sf_.M.col(j))) > 1e-9) {
          sf_.basis[static_cast<std::size_t>(i)] = j;
          break;
        }
      }
    }
    refactor();
  }

  void refactor() {
    const Eigen::Index m = sf_.M.rows();
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = sf_.M.col(basis(i));
    lu_.compute(B);
  }

  Eigen::VectorXd basic_values() const { return lu_.solve(sf_.rhs); }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    const Eigen::Index m = sf_.M.rows();
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb(i) = cost(basis(i));
    return lu_.transpose().solve(cb);
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(sf_.M.cols());
    const Eigen::VectorXd xb = basic_values();
    for (Eigen::Index i = 0; i < sf_.M.rows(); ++i) z(basis(i)) = xb(i);
    return z;
  }

  const Eigen::VectorXd& ray() const { return ray_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::Index basis(Eigen::Index i) const { return sf_.basis[static_cast<std::size_t>(i)]; }
  bool is_basic(Eigen::Index j) const {
    return std::find(sf_.basis.begin(), sf_.basis.end(), j) != sf_.basis.end();
  }

  StandardForm& sf_;
  int limit_;
  int iterations_ = 0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd ray_;
};

void validate(const LpProblem& p) {
  const Eigen::Index m = p.A.rows();
  const Eigen::Index n = p.A.cols();
  if (p.c.size() != n) throw SolverError("lp: objective length does not match A's columns");
  if (p.b.size() != m) throw SolverError("lp: rhs length does not match A's rows");
  if (static_cast<Eigen::Index>(p.senses.size()) != m) {
    throw SolverError("lp: one sense per constraint row is required");
  }
  if (p.lower.size() != 0 && p.lower.size() != n) {
    throw SolverError("lp: lower bound length does not match the variables");
  }
  if (!p.c.allFinite() || !p.A.allFinite() || !p.b.allFinite() ||
      (p.lower.size() != 0 && !p.lower.allFinite())) {
    throw SolverError("lp: non-finite data");
  }
}

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution solve_lp(const LpProblem& problem) {
  validate(problem);
  const Eigen::Index n = problem.A.cols();
  const Eigen::Index m = problem.A.rows();
  const Eigen::VectorXd lower =
      problem.lower.size() == 0 ? Eigen::VectorXd::Zero(n) : problem.lower;

  LpSolution sol;
  if (m == 0) {
    if ((problem.c.array() < 0.0).any()) {
      sol.status = LpStatus::kUnbounded;
      sol.ray = (problem.c.array() < 0.0).cast<double>().matrix();
      return sol;
    }
    sol.status = LpStatus::kOptimal;
    sol.x = lower;
    sol.objective = problem.c.dot(lower);
    sol.y = Eigen::VectorXd::Zero(0);
    sol.dual_objective = sol.objective;
    return sol;
  }

  StandardForm sf = standardize(problem, lower);
  const Eigen::Index total = sf.M.cols();
  const int limit = 5000 + 50 * static_cast<int>(m + total);
  RevisedSimplex simplex(sf, limit);

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(total);
  phase1_cost.tail(total - sf.first_artificial).setOnes();
  if (sf.first_artificial < total) {
    simplex.run(phase1_cost, total);
    const Eigen::VectorXd z = simplex.primal();
    const double infeasibility = z.tail(total - sf.first_artificial).sum();
    const double scale = std::max(1.0, sf.rhs.lpNorm<Eigen::Infinity>());
    if (infeasibility > LpTolerances::kFeasibility * scale) {
      sol.status = LpStatus::kInfeasible;
      sol.ray = sf.row_sign.cwiseProduct(simplex.duals(phase1_cost));
      sol.iterations = simplex.iterations();
      return sol;
    }
    simplex.drive_out_artificials();
  }

  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(total);
  phase2_cost.head(n) = problem.c;
  const PhaseResult result = simplex.run(phase2_cost, sf.first_artificial);
  sol.iterations = simplex.iterations();
  if (result == PhaseResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    sol.ray = simplex.ray().head(n);
    return sol;
  }
  sol.status = LpStatus::kOptimal;
  sol.x = simplex.primal().head(n) + lower;
  sol.objective = problem.c.dot(sol.x);
  sol.y = sf.row_sign.cwiseProduct(simplex.duals(phase2_cost));
  sol.dual_objective =
      problem.b.dot(sol.y) + (problem.c - problem.A.transpose() * sol.y).dot(lower);
  return sol;
}

double primal_infeasibility(const LpProblem& problem, const Eigen::VectorXd& x) {
  const Eigen::VectorXd ax = problem.A * x;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < problem.A.rows(); ++r) {
    const double diff = ax(r) - problem.b(r);
    switch (problem.senses[static_cast<std::size_t>(r)]) {
      case Sense::kGreaterEqual:
        worst = std::max(worst, -diff);
        break;
      case Sense::kLessEqual:
        worst = std::max(worst, diff);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(diff));
        break;
    }
  }
  const Eigen::VectorXd lower =
      problem.lower.size() == 0 ? Eigen::VectorXd::Zero(x.size()) : problem.lower;
  if (x.size() > 0) worst = std::max(worst, (lower - x).maxCoeff());
  return worst;
}

double dual_infeasibility(const LpProblem& problem, const Eigen::VectorXd& y) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < y.size(); ++r) {
    switch (problem.senses[static_cast<std::size_t>(r)]) {
      case Sense::kGreaterEqual:
        worst = std::max(worst, -y(r));
        break;
      case Sense::kLessEqual:
        worst = std::max(worst, y(r));
        break;
      case Sense::kEqual:
        break;
    }
  }
  const Eigen::VectorXd reduced = problem.c - problem.A.transpose() * y;
  if (reduced.size() > 0) worst = std::max(worst, -reduced.minCoeff());
  return worst;
}

}  // namespace fedgame
