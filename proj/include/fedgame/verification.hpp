#ifndef FEDGAME_VERIFICATION_HPP
#define FEDGAME_VERIFICATION_HPP

#include "fedgame/model.hpp"
#include "fedgame/solvers.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fedgame {

enum class ViolationKind { kInfeasible, kProfitableReduction, kEnvy };

const char* to_string(ViolationKind kind);

struct Violation {
  Eigen::Index agent = 0;
  ViolationKind kind = ViolationKind::kInfeasible;
  double magnitude = 0.0;
  // Envied agent for kEnvy, -1 otherwise.
  Eigen::Index other = -1;
  // The deviation that demonstrates the violation (reduced or swapped θ).
  Allocation witness;
};

/// Unset optionals mean the property was not checked.
struct Verdict {
  bool feasible = false;
  std::optional<bool> stable;
  std::optional<bool> envy_free;
  std::vector<Violation> violations;
};

/// Feasible, and no agent can lower her own contribution and stay satisfied.
/// Continuous spaces compare against the best response (theta_i <= tol or
/// f_i(theta) >= theta_i - tol); integer spaces try a unit decrement.
Verdict is_stable_equilibrium(const Instance& instance, const Allocation& theta,
                              double tol = kVerdictTol);

/// Feasible, and no agent i with theta_j < theta_i - tol still meets mu_i
/// after swapping loads with j. Swaps that leave the strategy space are
/// unavailable.
Verdict is_envy_free(const Instance& instance, const Allocation& theta,
                     double tol = kVerdictTol);

/// Feasibility, stability and envy-freeness together.
Verdict verify(const Instance& instance, const Allocation& theta, double tol = kVerdictTol);

/// Cost ratio of a constrained optimum (stable or envy-free) to the social
/// optimum. `exact` is false for any heuristic side; then the ratio is only
/// an estimate and `lower_bound_only` is set.
struct PriceReport {
  std::string which;  // "pos" or "pof"
  double opt_cost = 0.0;
  double eq_cost = 0.0;
  double ratio = 0.0;
  Method opt_method = Method::kLp;
  Method eq_method = Method::kSupportEnum;
  bool opt_exact = true;
  bool eq_exact = true;
  bool lower_bound_only = false;
  Allocation opt_theta;
  Allocation eq_theta;
};

PriceReport price_of_stability(const Instance& instance);
PriceReport price_of_fairness(const Instance& instance);

}  // namespace fedgame

#endif  // FEDGAME_VERIFICATION_HPP
