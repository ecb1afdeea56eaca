#ifndef FEDGAME_TABULAR_HPP
#define FEDGAME_TABULAR_HPP

#include "fedgame/types.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace fedgame {

struct Instance;

using GridPoint = Eigen::VectorXi;

/// Three agents on a cycle; agent i learns from its own samples and those of
/// agent i-1 (mod 3): u_i = 1 - 1/2 (1 - 1/d)^{theta_i + theta_{i-1}}.
struct PacCycleFamily {
  int d = 1;
};

/// Utilities given explicitly on the integer grid prod_i {0..upper_i}.
///
/// `table` holds one column of k utilities per grid point, in lexicographic
/// order of the point (agent 0 most significant). It may be empty when a
/// closed-form family is attached.
struct TabularModel {
  Eigen::VectorXi upper;
  Eigen::MatrixXd table;
  std::optional<PacCycleFamily> family;

  Eigen::Index agents() const { return upper.size(); }
};

TabularModel make_tabular_model(Eigen::VectorXi upper, Eigen::MatrixXd table,
                                std::optional<PacCycleFamily> family = std::nullopt);

/// Number of points in the grid; throws ValidationError past `cap`.
std::size_t grid_size(const Eigen::VectorXi& upper, std::size_t cap = std::size_t(1) << 40);
std::size_t grid_index(const Eigen::VectorXi& upper, const GridPoint& point);
GridPoint grid_point(const Eigen::VectorXi& upper, std::size_t index);

/// Visits every grid point in lexicographic order.
void for_each_grid_point(const Eigen::VectorXi& upper,
                         const std::function<void(const GridPoint&)>& visit);

Eigen::VectorXd pac_cycle_utilities(int d, const GridPoint& theta);

Eigen::VectorXd eval_tabular(const TabularModel& model, const GridPoint& theta);
/// Accepts real entries within kIntegralityTol of an integer.
Eigen::VectorXd eval_tabular(const TabularModel& model, const Allocation& theta);

GridPoint to_grid_point(const Allocation& theta);

struct EquilibriumSearchResult {
  std::vector<GridPoint> stable;  // lexicographic order
  std::size_t feasible_count = 0;
  std::size_t grid_points = 0;
};

inline constexpr std::size_t kDefaultGridCap = 10'000'000;

/// Enumerates the integer grid of `instance` (tabular model, or any model on
/// an integer-box space). A point is stable when it is feasible and every
/// agent with a positive entry would violate her constraint after a unit
/// decrement.
EquilibriumSearchResult exhaustive_equilibrium_search(const Instance& instance,
                                                      std::size_t cap = kDefaultGridCap,
                                                      double tol = kFeasibilityTol);

}  // namespace fedgame

#endif  // FEDGAME_TABULAR_HPP
