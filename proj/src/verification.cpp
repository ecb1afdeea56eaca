#include "fedgame/verification.hpp"

#include <limits>

namespace fedgame {

namespace {

bool check_feasibility(const Instance& instance, const Eigen::VectorXd& u, double tol,
                       std::vector<Violation>& violations) {
  bool feasible = true;
  for (Eigen::Index i = 0; i < instance.agents(); ++i) {
    const double gap = instance.mu(i) - u(i);
    if (gap > tol) {
      feasible = false;
      violations.push_back({i, ViolationKind::kInfeasible, gap, -1, Allocation()});
    }
  }
  return feasible;
}

bool check_stability(const Instance& instance, const Allocation& theta, double tol,
                     std::vector<Violation>& violations) {
  bool stable = true;
  for (Eigen::Index i = 0; i < instance.agents(); ++i) {
    if (instance.space.is_integer()) {
      if (theta(i) < 1.0 - kIntegralityTol) continue;
      Allocation lowered = theta;
      lowered(i) -= 1.0;
      const double u = evaluate(instance, lowered)(i);
      if (u >= instance.mu(i) - tol) {
        stable = false;
        violations.push_back({i, ViolationKind::kProfitableReduction, 1.0, -1, lowered});
      }
    } else {
      if (theta(i) <= tol) continue;
      const double f = best_response(instance, theta, i);
      if (f < theta(i) - tol) {
        stable = false;
        Allocation lowered = theta;
        lowered(i) = f;
        violations.push_back({i, ViolationKind::kProfitableReduction, theta(i) - f, -1, lowered});
      }
    }
  }
  return stable;
}

bool check_envy(const Instance& instance, const Allocation& theta, double tol,
                std::vector<Violation>& violations) {
  bool envy_free = true;
  const Eigen::Index k = instance.agents();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j || !(theta(j) < theta(i) - tol)) continue;
      Allocation swapped = theta;
      std::swap(swapped(i), swapped(j));
      if (!in_space(instance, swapped)) continue;
      const double u = evaluate(instance, swapped)(i);
      if (u >= instance.mu(i) - tol) {
        envy_free = false;
        violations.push_back({i, ViolationKind::kEnvy, u - instance.mu(i), j, swapped});
      }
    }
  }
  return envy_free;
}

}  // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kInfeasible:
      return "infeasible";
    case ViolationKind::kProfitableReduction:
      return "profitable-reduction";
    case ViolationKind::kEnvy:
      return "envy";
  }
  return "unknown";
}

Verdict is_stable_equilibrium(const Instance& instance, const Allocation& theta, double tol) {
  Verdict v;
  v.feasible = check_feasibility(instance, evaluate(instance, theta), tol, v.violations);
  const bool no_reduction = check_stability(instance, theta, tol, v.violations);
  v.stable = v.feasible && no_reduction;
  return v;
}

Verdict is_envy_free(const Instance& instance, const Allocation& theta, double tol) {
  Verdict v;
  v.feasible = check_feasibility(instance, evaluate(instance, theta), tol, v.violations);
  const bool no_envy = check_envy(instance, theta, tol, v.violations);
  v.envy_free = v.feasible && no_envy;
  return v;
}

Verdict verify(const Instance& instance, const Allocation& theta, double tol) {
  Verdict v;
  v.feasible = check_feasibility(instance, evaluate(instance, theta), tol, v.violations);
  const bool no_reduction = check_stability(instance, theta, tol, v.violations);
  const bool no_envy = check_envy(instance, theta, tol, v.violations);
  v.stable = v.feasible && no_reduction;
  v.envy_free = v.feasible && no_envy;
  return v;
}

namespace {

PriceReport make_price(const char* which, const SolveReport& opt, const SolveReport& other) {
  PriceReport r;
  r.which = which;
  r.opt_cost = opt.cost;
  r.eq_cost = other.cost;
  r.opt_method = opt.method;
  r.eq_method = other.method;
  r.opt_exact = !opt.heuristic;
  r.eq_exact = !other.heuristic;
  r.lower_bound_only = !(r.opt_exact && r.eq_exact);
  r.opt_theta = opt.theta;
  r.eq_theta = other.theta;
  if (opt.cost > 0.0) {
    r.ratio = other.cost / opt.cost;
  } else {
    r.ratio = other.cost > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return r;
}

}  // namespace

PriceReport price_of_stability(const Instance& instance) {
  return make_price("pos", social_opt(instance), optimal_stable_eq(instance));
}

PriceReport price_of_fairness(const Instance& instance) {
  return make_price("pof", social_opt(instance), optimal_envy_free(instance));
}

}  // namespace fedgame
