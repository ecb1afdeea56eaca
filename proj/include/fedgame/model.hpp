#ifndef FEDGAME_MODEL_HPP
#define FEDGAME_MODEL_HPP

#include "fedgame/coverage.hpp"
#include "fedgame/linear.hpp"
#include "fedgame/tabular.hpp"
#include "fedgame/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fedgame {

using UtilityModel = std::variant<LinearModel, CoverageModel, TabularModel>;

Eigen::Index agent_count(const UtilityModel& model);
const char* model_type_name(const UtilityModel& model);

/// A complete collaborative game: utilities, requirements, strategy space.
///
/// Instances are immutable once built by make_instance(), which checks the
/// dimensions, that integer spaces are bounded, and that every agent can
/// meet her requirement alone. Non-fatal findings (for example a linear
/// W that is not PSD) are kept in `warnings`.
struct Instance {
  UtilityModel model;
  Eigen::VectorXd mu;
  StrategySpace space;
  std::string label;
  std::vector<std::string> warnings;

  Eigen::Index agents() const { return mu.size(); }
  const LinearModel* linear() const { return std::get_if<LinearModel>(&model); }
  const CoverageModel* coverage() const { return std::get_if<CoverageModel>(&model); }
  const TabularModel* tabular() const { return std::get_if<TabularModel>(&model); }
};

Instance make_instance(UtilityModel model, Eigen::VectorXd mu, StrategySpace space,
                       std::string label = {});

/// Throws ValidationError unless theta has k entries, is non-negative, and
/// (for integer spaces) is integral and inside the box.
void check_in_space(const Instance& instance, const Allocation& theta);
bool in_space(const Instance& instance, const Allocation& theta);

Eigen::VectorXd evaluate(const Instance& instance, const Allocation& theta);

bool is_feasible(const Instance& instance, const Allocation& theta,
                 double tol = kFeasibilityTol);

/// Minimal x >= 0 with u_agent(x e_agent) >= mu_agent.
double solo_requirement(const Instance& instance, Eigen::Index agent);

/// Minimal contribution of `agent` meeting her requirement with the other
/// entries of theta held fixed (theta(agent) is ignored). Continuous models
/// only; integer spaces use unit steps.
double best_response(const Instance& instance, const Allocation& theta, Eigen::Index agent);

struct WellBehavedEstimate {
  Eigen::VectorXd c2_lower;  // min observed du_i/dtheta_i
  Eigen::VectorXd c1_upper;  // max observed du_i/dtheta_j, j != i
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Finite-difference evidence for the well-behavedness constants over a grid
/// of `grid` points per axis in prod_i [0, box_upper_i]. Both one-sided
/// quotients are taken at each point, so kinks at integer breakpoints of
/// coverage utilities contribute both sub-gradients. Diagnostic only.
WellBehavedEstimate check_well_behaved(const Instance& instance, const Eigen::VectorXd& box_upper,
                                       int grid);

}  // namespace fedgame

#endif  // FEDGAME_MODEL_HPP
