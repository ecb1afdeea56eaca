#include "fedgame/tabular.hpp"

#include "fedgame/model.hpp"
#include "fedgame/parallel.hpp"

#include <cmath>
#include <limits>

namespace fedgame {

TabularModel make_tabular_model(Eigen::VectorXi upper, Eigen::MatrixXd table,
                                std::optional<PacCycleFamily> family) {
  if (upper.size() == 0) throw ValidationError("tabular model: no agents");
  if ((upper.array() < 0).any()) throw ValidationError("tabular model: negative upper bound");
  if (family) {
    if (upper.size() != 3) throw ValidationError("tabular model: pac-cycle family has 3 agents");
    if (family->d < 1) throw ValidationError("tabular model: pac-cycle d must be >= 1");
  }
  if (table.size() == 0) {
    if (!family) throw ValidationError("tabular model: table is empty and no closed form given");
  } else {
    const std::size_t points = grid_size(upper);
    if (table.rows() != upper.size() || static_cast<std::size_t>(table.cols()) != points) {
      throw ValidationError("tabular model: table must cover all " + std::to_string(points) +
                            " grid points with " + std::to_string(upper.size()) + " utilities each");
    }
    if (!table.allFinite()) throw ValidationError("tabular model: non-finite utility");
  }
  return TabularModel{std::move(upper), std::move(table), family};
}

std::size_t grid_size(const Eigen::VectorXi& upper, std::size_t cap) {
  std::size_t size = 1;
  for (Eigen::Index i = 0; i < upper.size(); ++i) {
    const auto extent = static_cast<std::size_t>(upper(i)) + 1;
    if (size > cap / extent) {
      throw ValidationError("grid too large: more than " + std::to_string(cap) + " points");
    }
    size *= extent;
  }
  return size;
}

std::size_t grid_index(const Eigen::VectorXi& upper, const GridPoint& point) {
  if (point.size() != upper.size()) throw ValidationError("grid point has the wrong dimension");
  std::size_t index = 0;
  for (Eigen::Index i = 0; i < upper.size(); ++i) {
    if (point(i) < 0 || point(i) > upper(i)) {
      throw ValidationError("point is off the grid in coordinate " + std::to_string(i));
    }
    index = index * (static_cast<std::size_t>(upper(i)) + 1) + static_cast<std::size_t>(point(i));
  }
  return index;
}

GridPoint grid_point(const Eigen::VectorXi& upper, std::size_t index) {
  GridPoint point(upper.size());
  for (Eigen::Index i = upper.size() - 1; i >= 0; --i) {
    const auto extent = static_cast<std::size_t>(upper(i)) + 1;
    point(i) = static_cast<int>(index % extent);
    index /= extent;
  }
  return point;
}

void for_each_grid_point(const Eigen::VectorXi& upper,
                         const std::function<void(const GridPoint&)>& visit) {
  GridPoint point = GridPoint::Zero(upper.size());
  while (true) {
    visit(point);
    Eigen::Index i = upper.size() - 1;
    for (; i >= 0; --i) {
      if (++point(i) <= upper(i)) break;
      point(i) = 0;
    }
    if (i < 0) return;
  }
}

Eigen::VectorXd pac_cycle_utilities(int d, const GridPoint& theta) {
  const double keep = 1.0 - 1.0 / d;
  Eigen::VectorXd u(3);
  for (int i = 0; i < 3; ++i) {
    const int prev = (i + 2) % 3;
    u(i) = 1.0 - 0.5 * std::pow(keep, theta(i) + theta(prev));
  }
  return u;
}

Eigen::VectorXd eval_tabular(const TabularModel& model, const GridPoint& theta) {
  const std::size_t index = grid_index(model.upper, theta);
  if (model.table.size() != 0) return model.table.col(static_cast<Eigen::Index>(index));
  return pac_cycle_utilities(model.family->d, theta);
}

GridPoint to_grid_point(const Allocation& theta) {
  GridPoint point(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double r = std::round(theta(i));
    if (std::abs(theta(i) - r) > kIntegralityTol) {
      throw ValidationError("entry " + std::to_string(i) + " is not integral");
    }
    point(i) = static_cast<int>(r);
  }
  return point;
}

Eigen::VectorXd eval_tabular(const TabularModel& model, const Allocation& theta) {
  return eval_tabular(model, to_grid_point(theta));
}

EquilibriumSearchResult exhaustive_equilibrium_search(const Instance& instance, std::size_t cap,
                                                      double tol) {
  if (!instance.space.is_integer()) {
    throw ValidationError("exhaustive search needs an integer strategy space");
  }
  const Eigen::VectorXi upper = instance.space.upper->array().round().cast<int>();
  const std::size_t total = grid_size(upper, cap);
  const Eigen::Index k = instance.agents();

  // 0 = infeasible, 1 = feasible, 2 = stable.
  std::vector<unsigned char> status(total, 0);
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const GridPoint point = grid_point(upper, n);
      const Allocation theta = point.cast<double>();
      const Eigen::VectorXd u = evaluate(instance, theta);
      if (((u - instance.mu).array() < -tol).any()) continue;
      bool stable = true;
      for (Eigen::Index i = 0; i < k && stable; ++i) {
        if (point(i) == 0) continue;
        Allocation lowered = theta;
        lowered(i) -= 1.0;
        if (evaluate(instance, lowered)(i) >= instance.mu(i) - tol) stable = false;
      }
      status[n] = stable ? 2 : 1;
    }
  });

  EquilibriumSearchResult result;
  result.grid_points = total;
  for (std::size_t n = 0; n < total; ++n) {
    if (status[n] == 0) continue;
    ++result.feasible_count;
    if (status[n] == 2) result.stable.push_back(grid_point(upper, n));
  }
  return result;
}

}  // namespace fedgame
