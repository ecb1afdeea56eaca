#ifndef FEDGAME_TYPES_HPP
#define FEDGAME_TYPES_HPP

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace fedgame {

/// Contribution vector: entry i is agent i's expected sample count.
using Allocation = Eigen::VectorXd;

/// Raised for malformed input: bad dimensions, schema violations,
/// unattainable requirements. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a solver cannot produce an answer (numerical failure,
/// infeasible subproblem that should be feasible). CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Absolute slack on u_i(theta) >= mu_i.
inline constexpr double kFeasibilityTol = 1e-9;
// Default tolerance for stability / envy verdicts.
inline constexpr double kVerdictTol = 1e-7;
// Integer-box entries must be this close to an integer.
inline constexpr double kIntegralityTol = 1e-9;

enum class SpaceKind { kContinuous, kInteger };

struct StrategySpace {
  SpaceKind kind = SpaceKind::kContinuous;
  // Per-agent upper bounds; required for kInteger.
  std::optional<Eigen::VectorXd> upper;

  bool is_integer() const { return kind == SpaceKind::kInteger; }
};

}  // namespace fedgame

#endif  // FEDGAME_TYPES_HPP
