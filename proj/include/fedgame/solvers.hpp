#ifndef FEDGAME_SOLVERS_HPP
#define FEDGAME_SOLVERS_HPP

#include "fedgame/lp.hpp"
#include "fedgame/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fedgame {

enum class Method { kLp, kSupportEnum, kPenalty, kBestResponse, kPadding, kExhaustive };

const char* to_string(Method method);

enum class SolveStatus { kOptimal, kConverged, kCycleDetected, kIterationLimit, kHeuristic };

const char* to_string(SolveStatus status);

struct Certificate {
  std::optional<Eigen::VectorXd> dual;               // LP multipliers
  std::optional<std::vector<Eigen::Index>> zero_set;  // agents forced to zero
  std::vector<Eigen::Index> tight;                   // constraints met with equality
  std::vector<double> residuals;                     // ||f(θ) - θ||_inf per iteration
};

struct SolveReport {
  Allocation theta;
  double cost = 0.0;
  Method method = Method::kLp;
  SolveStatus status = SolveStatus::kOptimal;
  Certificate certificate;
  bool verified_stable = false;
  bool verified_envy_free = false;
  bool heuristic = false;
  int iterations = 0;
};

enum class StartPolicy { kZeros, kSolo, kRandom };

struct BrConfig {
  double damping = 0.5;
  int max_iterations = 10000;
  double tol = 1e-8;
  StartPolicy start = StartPolicy::kZeros;
  std::uint64_t seed = 0;
  std::optional<Allocation> start_point;  // overrides `start`
};

struct StableEqOptions {
  // Support enumeration runs up to this many agents; beyond it the
  // quadratic-penalty heuristic on the convex program takes over.
  int enumeration_cap = 22;
};

/// min 1^T θ s.t. W θ >= μ, θ >= 0, with the LP dual in the certificate.
SolveReport social_opt_linear(const Instance& instance);

/// Socially optimal allocation for any model family: exact LP for linear,
/// exhaustive enumeration on integer spaces, heuristic search for coverage.
SolveReport social_opt(const Instance& instance);

/// Optimal stable equilibrium of a linear game by support enumeration.
///
/// Every zero-set I (agents contributing nothing) is tried in order of
/// increasing |I|, lexicographically within a size. For each, the support
/// agents must be tight (W_j θ = μ_j) and the others merely satisfied; the
/// cheapest feasible candidate wins, ties going to the earlier zero-set.
/// Enumeration stops once a level reaches the social-optimum lower bound.
SolveReport optimal_stable_eq_linear(const Instance& instance, const StableEqOptions& options = {});

/// Heuristic: projected gradient on the penalized convex program
/// (θ^T W θ - μ^T θ <= 0, W θ >= μ, θ >= 0), then an exact re-solve on the
/// support it finds.
SolveReport stable_eq_penalty(const Instance& instance);

/// f(θ): every agent's best response to the others' current contributions.
Allocation best_response_step(const Instance& instance, const Allocation& theta);

/// Damped iteration θ <- (1 - λ) θ + λ f(θ). Non-convergence is reported in
/// the status, never thrown.
SolveReport best_response_dynamics(const Instance& instance, const BrConfig& config = {});

/// Constant vector at max_j θ_j; feasible by monotonicity, envy-free since
/// all loads are equal.
Allocation envy_free_padding(const Instance& instance, const Allocation& theta_feasible);

/// Cheapest constant allocation (bisection), also trying two-level vectors
/// where one agent takes a fixed fraction of the others' load. Always
/// heuristic: no global envy-free optimality claim.
SolveReport optimal_uniform_envy_free(const Instance& instance);

struct CoverageSearchOptions {
  double resolution = 1.0 / 64.0;
  std::size_t grid_cap = 2'000'000;
  int random_starts = 4;
  std::uint64_t seed = 0;
};

/// Best verified stable point found by best-response dynamics from several
/// starts and, for k <= 4, a grid scan at `resolution`. Heuristic.
SolveReport coverage_stable_search(const Instance& instance,
                                   const CoverageSearchOptions& options = {});

/// Cheapest stable equilibrium, dispatching on the model family and space.
SolveReport optimal_stable_eq(const Instance& instance, const StableEqOptions& options = {});

/// Cheapest envy-free allocation found: exhaustive on integer spaces,
/// otherwise the best verified candidate among uniform / two-level vectors
/// and (linear) the optimal stable equilibrium.
SolveReport optimal_envy_free(const Instance& instance);

}  // namespace fedgame

#endif  // FEDGAME_SOLVERS_HPP
