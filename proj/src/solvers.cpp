#include "fedgame/solvers.hpp"

#include "fedgame/parallel.hpp"
#include "fedgame/verification.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

namespace fedgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void attach_verdicts(const Instance& instance, SolveReport& report) {
  report.cost = report.theta.sum();
  const Verdict v = verify(instance, report.theta);
  report.verified_stable = v.stable.value_or(false);
  report.verified_envy_free = v.envy_free.value_or(false);
}

std::vector<Eigen::Index> tight_constraints(const Instance& instance, const Allocation& theta) {
  const Eigen::VectorXd u = evaluate(instance, theta);
  std::vector<Eigen::Index> tight;
  for (Eigen::Index i = 0; i < instance.agents(); ++i) {
    if (std::abs(u(i) - instance.mu(i)) <= LpTolerances::kFeasibility * (1.0 + std::abs(instance.mu(i)))) {
      tight.push_back(i);
    }
  }
  return tight;
}

const LinearModel& require_linear(const Instance& instance, const char* who) {
  const auto* lin = instance.linear();
  if (lin == nullptr) throw ValidationError(std::string(who) + ": needs a linear model");
  if (instance.space.is_integer()) {
    throw ValidationError(std::string(who) + ": needs a continuous strategy space");
  }
  return *lin;
}

void require_continuous(const Instance& instance, const char* who) {
  if (instance.space.is_integer() || instance.tabular()) {
    throw ValidationError(std::string(who) + ": needs a continuous model and strategy space");
  }
}

Eigen::VectorXd solo_vector(const Instance& instance) {
  Eigen::VectorXd solo(instance.agents());
  for (Eigen::Index i = 0; i < instance.agents(); ++i) solo(i) = solo_requirement(instance, i);
  return solo;
}

// Smallest c in [0, hi] with pred(c), given pred(hi) and monotonicity.
double bisect_min(const std::function<bool(double)>& pred, double hi) {
  if (pred(0.0)) return 0.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Finds some hi with pred(hi) by doubling from `start`; nullopt if none.
std::optional<double> bracket(const std::function<bool(double)>& pred, double start) {
  double hi = std::max(start, 1e-9);
  for (int it = 0; it < 64; ++it, hi *= 2.0) {
    if (pred(hi)) return hi;
  }
  return std::nullopt;
}

bool feasible_safe(const Instance& instance, const Allocation& theta) {
  return in_space(instance, theta) && is_feasible(instance, theta);
}

// ---------------------------------------------------------------- support sets

struct Candidate {
  bool feasible = false;
  double cost = kInf;
  Allocation theta;
};

Candidate solve_zero_set(const Instance& instance, const LinearModel& lin,
                         const std::vector<char>& is_zero) {
  const Eigen::Index k = lin.agents();
  std::vector<Eigen::Index> support;
  std::vector<Eigen::Index> zero;
  for (Eigen::Index i = 0; i < k; ++i) {
    (is_zero[static_cast<std::size_t>(i)] ? zero : support).push_back(i);
  }
  const auto& mu = instance.mu;
  Candidate cand;
  Allocation theta = Allocation::Zero(k);
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s > 0) {
    Eigen::MatrixXd wss(s, s);
    Eigen::VectorXd mus(s);
    for (Eigen::Index a = 0; a < s; ++a) {
      mus(a) = mu(support[a]);
      for (Eigen::Index b = 0; b < s; ++b) wss(a, b) = lin.W(support[a], support[b]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(wss);
    lu.setThreshold(1e-10);
    Eigen::VectorXd ts;
    if (lu.isInvertible()) {
      ts = lu.solve(mus);
      if (ts.minCoeff() < -1e-9 * (1.0 + ts.lpNorm<Eigen::Infinity>())) return cand;
      ts = ts.cwiseMax(0.0);
    } else {
      // Singular tight system: min 1^T θ_S over its solution set.
      LpProblem lp;
      lp.c = Eigen::VectorXd::Ones(s);
      lp.A.resize(k, s);
      lp.b = mu;
      lp.senses.resize(static_cast<std::size_t>(k));
      for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index b = 0; b < s; ++b) lp.A(j, b) = lin.W(j, support[b]);
        lp.senses[static_cast<std::size_t>(j)] =
            is_zero[static_cast<std::size_t>(j)] ? Sense::kGreaterEqual : Sense::kEqual;
      }
      const LpSolution sol = solve_lp(lp);
      if (sol.status != LpStatus::kOptimal) return cand;
      ts = sol.x.cwiseMax(0.0);
    }
    for (Eigen::Index a = 0; a < s; ++a) theta(support[a]) = ts(a);
  }
  const Eigen::VectorXd u = lin.W * theta;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double slack = kFeasibilityTol * (1.0 + std::abs(mu(j)));
    if (u(j) < mu(j) - slack) return cand;
    if (!is_zero[static_cast<std::size_t>(j)] && std::abs(u(j) - mu(j)) > 1e-7 * (1.0 + std::abs(mu(j)))) {
      return cand;
    }
  }
  if (instance.space.upper && (theta.array() > instance.space.upper->array() + kIntegralityTol).any()) {
    return cand;
  }
  cand.feasible = true;
  cand.theta = theta;
  cand.cost = theta.sum();
  return cand;
}

// Single-swap support repair for the tight system: drop the most negative
// support entry, else add the most violated zero agent. Updates `is_zero`.
Candidate correct_support(const Instance& instance, const LinearModel& lin, std::vector<char>& is_zero) {
  const Eigen::Index k = lin.agents();
  std::set<std::vector<char>> seen;
  while (seen.insert(is_zero).second) {
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!is_zero[static_cast<std::size_t>(i)]) support.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(support.size());
    Allocation theta = Allocation::Zero(k);
    if (s > 0) {
      Eigen::MatrixXd wss(s, s);
      Eigen::VectorXd mus(s);
      for (Eigen::Index a = 0; a < s; ++a) {
        mus(a) = instance.mu(support[a]);
        for (Eigen::Index b = 0; b < s; ++b) wss(a, b) = lin.W(support[a], support[b]);
      }
      const Eigen::VectorXd ts = wss.completeOrthogonalDecomposition().solve(mus);
      Eigen::Index worst = 0;
      if (ts.minCoeff(&worst) < -1e-12) {
        is_zero[static_cast<std::size_t>(support[worst])] = 1;
        continue;
      }
      for (Eigen::Index a = 0; a < s; ++a) theta(support[a]) = ts(a);
    }
    const Eigen::VectorXd gap = instance.mu - lin.W * theta;
    Eigen::Index add = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (is_zero[static_cast<std::size_t>(i)] && gap(i) > kFeasibilityTol && (add < 0 || gap(i) > gap(add))) add = i;
    }
    if (add < 0) return solve_zero_set(instance, lin, is_zero);
    is_zero[static_cast<std::size_t>(add)] = 0;
  }
  return {};
}

// Advances `combo` (sorted indices into [0, k)) to the next size-preserving
// combination in lexicographic order; false when exhausted.
bool next_combination(std::vector<Eigen::Index>& combo, Eigen::Index k) {
  const auto s = static_cast<Eigen::Index>(combo.size());
  Eigen::Index i = s - 1;
  while (i >= 0 && combo[static_cast<std::size_t>(i)] == k - s + i) --i;
  if (i < 0) return false;
  ++combo[static_cast<std::size_t>(i)];
  for (Eigen::Index j = i + 1; j < s; ++j) {
    combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

// ------------------------------------------------------------ coverage search

// Lowers coordinates one at a time while the allocation stays feasible.
Allocation refine_feasible(const Instance& instance, Allocation theta) {
  for (int pass = 0; pass < 100; ++pass) {
    bool improved = false;
    for (Eigen::Index i = 0; i < instance.agents(); ++i) {
      const double current = theta(i);
      if (current <= 0.0) continue;
      auto pred = [&](double x) {
        Allocation probe = theta;
        probe(i) = x;
        return feasible_safe(instance, probe);
      };
      const double lowered = bisect_min(pred, current);
      if (lowered < current - 1e-12) {
        theta(i) = lowered;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return theta;
}

// Grid over prod_i [0, box_i], step h coarsened until under `cap` points.
struct Grid {
  double h = 0.0;
  Eigen::VectorXi steps;
};

Grid make_grid(const Eigen::VectorXd& box, double resolution, std::size_t cap) {
  Grid g;
  g.h = resolution;
  while (true) {
    g.steps = (box.array() / g.h).ceil().cast<int>();
    double total = 1.0;
    for (Eigen::Index i = 0; i < box.size(); ++i) total *= g.steps(i) + 1.0;
    if (total <= static_cast<double>(cap)) return g;
    g.h *= 2.0;
  }
}

Allocation grid_allocation(const Grid& g, const Eigen::VectorXd& box, const GridPoint& p) {
  return (p.cast<double>() * g.h).cwiseMin(box);
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::kLp:
      return "lp";
    case Method::kSupportEnum:
      return "support-enum";
    case Method::kPenalty:
      return "penalty";
    case Method::kBestResponse:
      return "best-response";
    case Method::kPadding:
      return "padding";
    case Method::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kCycleDetected:
      return "cycle-detected";
    case SolveStatus::kIterationLimit:
      return "iteration-limit";
    case SolveStatus::kHeuristic:
      return "heuristic";
  }
  return "unknown";
}

SolveReport social_opt_linear(const Instance& instance) {
  const LinearModel& lin = require_linear(instance, "social_opt");
  const Eigen::Index k = lin.agents();
  LpProblem lp;
  lp.c = Eigen::VectorXd::Ones(k);
  lp.A = lin.W;
  lp.b = instance.mu;
  lp.senses.assign(static_cast<std::size_t>(k), Sense::kGreaterEqual);
  if (instance.space.upper) {
    lp.A.conservativeResize(2 * k, k);
    lp.A.bottomRows(k) = Eigen::MatrixXd::Identity(k, k);
    lp.b.conservativeResize(2 * k);
    lp.b.tail(k) = *instance.space.upper;
    lp.senses.resize(static_cast<std::size_t>(2 * k), Sense::kLessEqual);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("social_opt: LP is ") + to_string(sol.status));
  }
  SolveReport report;
  report.method = Method::kLp;
  report.status = SolveStatus::kOptimal;
  report.theta = sol.x.cwiseMax(0.0);
  report.iterations = sol.iterations;
  report.certificate.dual = sol.y.head(k);
  report.certificate.tight = tight_constraints(instance, report.theta);
  attach_verdicts(instance, report);
  return report;
}

SolveReport optimal_stable_eq_linear(const Instance& instance, const StableEqOptions& options) {
  const LinearModel& lin = require_linear(instance, "optimal_stable_eq");
  const Eigen::Index k = lin.agents();
  if (k > options.enumeration_cap) return stable_eq_penalty(instance);

  const double lower_bound = social_opt_linear(instance).cost;
  const double stop_at = lower_bound + 1e-9 * (1.0 + std::abs(lower_bound));

  Candidate best;
  std::vector<Eigen::Index> best_zero;
  constexpr std::size_t kBatch = 4096;
  bool done = false;
  for (Eigen::Index size = 0; size <= k && !done; ++size) {
    std::vector<Eigen::Index> combo(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
    bool more = true;
    while (more && !done) {
      std::vector<std::vector<Eigen::Index>> batch;
      while (more && batch.size() < kBatch) {
        batch.push_back(combo);
        more = size > 0 && next_combination(combo, k);
      }
      std::vector<Candidate> results(batch.size());
      parallel_for(batch.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
          std::vector<char> is_zero(static_cast<std::size_t>(k), 0);
          for (auto i : batch[b]) is_zero[static_cast<std::size_t>(i)] = 1;
          results[b] = solve_zero_set(instance, lin, is_zero);
        }
      });
      for (std::size_t b = 0; b < batch.size(); ++b) {
        const Candidate& c = results[b];
        if (!c.feasible) continue;
        if (!best.feasible || c.cost < best.cost - 1e-9 * (1.0 + std::abs(best.cost))) {
          best = c;
          best_zero = batch[b];
        }
        if (best.cost <= stop_at) {
          done = true;
          break;
        }
      }
    }
  }
  if (!best.feasible) {
    throw SolverError("optimal_stable_eq: no stable equilibrium found by support enumeration");
  }
  SolveReport report;
  report.method = Method::kSupportEnum;
  report.status = SolveStatus::kOptimal;
  report.theta = best.theta;
  report.certificate.zero_set = best_zero;
  report.certificate.tight = tight_constraints(instance, best.theta);
  attach_verdicts(instance, report);
  return report;
}

SolveReport stable_eq_penalty(const Instance& instance) {
  const LinearModel& lin = require_linear(instance, "stable_eq_penalty");
  const Eigen::Index k = lin.agents();
  const Eigen::MatrixXd& W = lin.W;
  const Eigen::VectorXd& mu = instance.mu;

  Allocation theta = social_opt_linear(instance).theta;
  const double w_norm = W.norm();
  int iterations = 0;
  for (double rho = 10.0; rho <= 1e5; rho *= 10.0) {
    const double step0 = 0.5 / (rho * (w_norm * w_norm + 1.0) * (1.0 + theta.norm()));
    for (int t = 0; t < 2000; ++t, ++iterations) {
      const Eigen::VectorXd wt = W * theta;
      const Eigen::VectorXd shortfall = (mu - wt).cwiseMax(0.0);
      const double excess = std::max(0.0, theta.dot(wt) - mu.dot(theta));
      const Eigen::VectorXd grad = Eigen::VectorXd::Ones(k) - rho * (W * shortfall) +
                                   rho * excess * (2.0 * wt - mu);
      const double step = step0 / std::sqrt(1.0 + t / 50.0);
      theta = (theta - step * grad).cwiseMax(0.0);
    }
  }

  SolveReport report;
  report.method = Method::kPenalty;
  report.status = SolveStatus::kHeuristic;
  report.heuristic = true;
  report.iterations = iterations;

  // Exact re-solve on the support the penalty iterate settled on.
  const double cutoff = 1e-6 * std::max(1.0, theta.lpNorm<Eigen::Infinity>());
  std::vector<char> is_zero(static_cast<std::size_t>(k), 0);
  std::vector<Eigen::Index> zero;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (theta(i) <= cutoff) {
      is_zero[static_cast<std::size_t>(i)] = 1;
      zero.push_back(i);
    }
  }
  Candidate polished = solve_zero_set(instance, lin, is_zero);
  if (!polished.feasible) polished = correct_support(instance, lin, is_zero);
  if (polished.feasible) {
    report.theta = polished.theta;
    zero.clear();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (is_zero[static_cast<std::size_t>(i)]) zero.push_back(i);
    }
    report.certificate.zero_set = zero;
  } else {
    BrConfig cfg;
    cfg.start_point = theta;
    const SolveReport br = best_response_dynamics(instance, cfg);
    report.theta = br.status == SolveStatus::kConverged ? br.theta : theta;
    report.iterations += br.iterations;
  }
  report.certificate.tight = tight_constraints(instance, report.theta);
  attach_verdicts(instance, report);
  return report;
}

Allocation best_response_step(const Instance& instance, const Allocation& theta) {
  require_continuous(instance, "best_response_step");
  check_in_space(instance, theta);
  Allocation f(instance.agents());
  for (Eigen::Index i = 0; i < instance.agents(); ++i) f(i) = best_response(instance, theta, i);
  return f;
}

SolveReport best_response_dynamics(const Instance& instance, const BrConfig& config) {
  require_continuous(instance, "best_response_dynamics");
  if (!(config.damping > 0.0 && config.damping <= 1.0)) {
    throw ValidationError("best_response_dynamics: damping must lie in (0, 1]");
  }
  if (!(config.tol > 0.0)) throw ValidationError("best_response_dynamics: tol must be positive");
  const Eigen::Index k = instance.agents();

  Allocation theta;
  if (config.start_point) {
    theta = *config.start_point;
  } else {
    switch (config.start) {
      case StartPolicy::kZeros:
        theta = Allocation::Zero(k);
        break;
      case StartPolicy::kSolo:
        theta = solo_vector(instance);
        break;
      case StartPolicy::kRandom: {
        std::mt19937_64 rng(config.seed);
        const Eigen::VectorXd solo = solo_vector(instance);
        theta.resize(k);
        for (Eigen::Index i = 0; i < k; ++i) {
          theta(i) = solo(i) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
        break;
      }
    }
  }
  check_in_space(instance, theta);

  auto key_of = [](const Allocation& v) {
    std::vector<double> key(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) key[static_cast<std::size_t>(i)] = std::round(v(i) * 1e12);
    return key;
  };
  std::set<std::vector<double>> seen;
  seen.insert(key_of(theta));

  SolveReport report;
  report.method = Method::kBestResponse;
  report.status = SolveStatus::kIterationLimit;
  report.heuristic = true;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const Allocation f = best_response_step(instance, theta);
    const double residual = (f - theta).lpNorm<Eigen::Infinity>();
    report.certificate.residuals.push_back(residual);
    report.iterations = it;
    if (residual <= config.tol) {
      report.status = SolveStatus::kConverged;
      report.heuristic = false;
      break;
    }
    theta = ((1.0 - config.damping) * theta + config.damping * f).eval();
    if (!seen.insert(key_of(theta)).second) {
      report.status = SolveStatus::kCycleDetected;
      break;
    }
  }
  report.theta = theta;
  attach_verdicts(instance, report);
  return report;
}

Allocation envy_free_padding(const Instance& instance, const Allocation& theta_feasible) {
  check_in_space(instance, theta_feasible);
  const Allocation padded = Allocation::Constant(instance.agents(), theta_feasible.maxCoeff());
  check_in_space(instance, padded);
  return padded;
}

SolveReport optimal_uniform_envy_free(const Instance& instance) {
  const Eigen::Index k = instance.agents();
  const Eigen::VectorXd solo = solo_vector(instance);
  const double hi = solo.maxCoeff();

  auto uniform = [&](double c) { return feasible_safe(instance, Allocation::Constant(k, c)); };
  Allocation best_theta;
  if (instance.space.is_integer()) {
    double c = 0.0;
    while (!uniform(c)) c += 1.0;  // terminates: c = max solo is feasible
    best_theta = Allocation::Constant(k, c);
  } else {
    best_theta = Allocation::Constant(k, bisect_min(uniform, hi));
  }
  double best_cost = best_theta.sum();

  if (!instance.space.is_integer() && k > 1) {
    for (Eigen::Index a = 0; a < k; ++a) {
      for (double r : {0.0, 0.25, 0.5, 0.75}) {
        auto two_level = [&](double c) {
          Allocation t = Allocation::Constant(k, c);
          t(a) = r * c;
          return t;
        };
        auto pred = [&](double c) { return feasible_safe(instance, two_level(c)); };
        const auto upper = bracket(pred, hi);
        if (!upper) continue;
        const Allocation t = two_level(bisect_min(pred, *upper));
        if (t.sum() < best_cost - 1e-12 && is_envy_free(instance, t).envy_free.value_or(false)) {
          best_cost = t.sum();
          best_theta = t;
        }
      }
    }
  }

  SolveReport report;
  report.method = Method::kPadding;
  report.status = SolveStatus::kHeuristic;
  report.heuristic = true;
  report.theta = best_theta;
  attach_verdicts(instance, report);
  return report;
}

SolveReport coverage_stable_search(const Instance& instance, const CoverageSearchOptions& options) {
  require_continuous(instance, "coverage_stable_search");
  const Eigen::Index k = instance.agents();
  std::vector<SolveReport> found;

  auto run_from = [&](BrConfig config) {
    SolveReport r = best_response_dynamics(instance, config);
    if (r.verified_stable) found.push_back(std::move(r));
  };
  for (StartPolicy start : {StartPolicy::kZeros, StartPolicy::kSolo}) {
    BrConfig config;
    config.start = start;
    run_from(config);
  }
  for (int s = 0; s < options.random_starts; ++s) {
    BrConfig config;
    config.start = StartPolicy::kRandom;
    config.seed = options.seed + static_cast<std::uint64_t>(s);
    run_from(config);
  }

  if (k <= 4) {
    const Eigen::VectorXd box = solo_vector(instance);
    const Grid g = make_grid(box, options.resolution, options.grid_cap);
    // Grid-stable: feasible and no agent can drop one grid step.
    std::vector<std::pair<double, GridPoint>> grid_stable;
    for_each_grid_point(g.steps, [&](const GridPoint& p) {
      const Allocation theta = grid_allocation(g, box, p);
      const Eigen::VectorXd u = evaluate(instance, theta);
      if (((u - instance.mu).array() < -kFeasibilityTol).any()) return;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (p(i) == 0) continue;
        Allocation lowered = theta;
        lowered(i) = std::max(0.0, lowered(i) - g.h);
        if (evaluate(instance, lowered)(i) >= instance.mu(i)) return;
      }
      grid_stable.emplace_back(theta.sum(), p);
    });
    std::stable_sort(grid_stable.begin(), grid_stable.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t keep = std::min<std::size_t>(grid_stable.size(), 8);
    for (std::size_t c = 0; c < keep; ++c) {
      const Allocation theta = grid_allocation(g, box, grid_stable[c].second);
      SolveReport direct;
      direct.method = Method::kExhaustive;
      direct.status = SolveStatus::kHeuristic;
      direct.heuristic = true;
      direct.theta = theta;
      attach_verdicts(instance, direct);
      if (direct.verified_stable) {
        found.push_back(std::move(direct));
        continue;
      }
      BrConfig config;
      config.start_point = theta;
      run_from(config);
    }
  }

  if (found.empty()) {
    throw SolverError("coverage_stable_search: no verified stable equilibrium found");
  }
  auto best = std::min_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.cost < b.cost - 1e-12;
  });
  SolveReport report = *best;
  report.heuristic = true;
  report.status = SolveStatus::kHeuristic;
  return report;
}

SolveReport social_opt(const Instance& instance) {
  if (instance.space.is_integer()) {
    const Eigen::VectorXi upper = instance.space.upper->array().round().cast<int>();
    (void)grid_size(upper, kDefaultGridCap);
    std::optional<Allocation> best;
    for_each_grid_point(upper, [&](const GridPoint& p) {
      const Allocation theta = p.cast<double>();
      if (is_feasible(instance, theta) && (!best || theta.sum() < best->sum() - 1e-12)) best = theta;
    });
    if (!best) throw SolverError("social_opt: no feasible grid point");
    SolveReport report;
    report.method = Method::kExhaustive;
    report.status = SolveStatus::kOptimal;
    report.theta = *best;
    report.certificate.tight = tight_constraints(instance, *best);
    attach_verdicts(instance, report);
    return report;
  }
  if (instance.linear()) return social_opt_linear(instance);

  // Coverage: local refinement from several feasible starts.
  const Eigen::Index k = instance.agents();
  const Eigen::VectorXd solo = solo_vector(instance);
  std::vector<Allocation> starts;
  starts.push_back(optimal_uniform_envy_free(instance).theta);
  for (Eigen::Index a = 0; a < k; ++a) {
    auto alone = [&](double x) {
      Allocation t = Allocation::Zero(k);
      t(a) = x;
      return t;
    };
    auto pred = [&](double x) { return feasible_safe(instance, alone(x)); };
    if (const auto upper = bracket(pred, solo.maxCoeff())) starts.push_back(alone(bisect_min(pred, *upper)));
  }
  bool from_grid = false;
  if (k <= 4) {
    const Eigen::VectorXd box = Eigen::VectorXd::Constant(k, solo.maxCoeff());
    const Grid g = make_grid(box, 1.0 / 64.0, 2'000'000);
    std::optional<Allocation> cheapest;
    for_each_grid_point(g.steps, [&](const GridPoint& p) {
      const Allocation theta = grid_allocation(g, box, p);
      if (cheapest && theta.sum() >= cheapest->sum()) return;
      if (is_feasible(instance, theta)) cheapest = theta;
    });
    if (cheapest) {
      starts.insert(starts.begin(), *cheapest);
      from_grid = true;
    }
  }
  SolveReport report;
  report.status = SolveStatus::kHeuristic;
  report.heuristic = true;
  report.method = from_grid ? Method::kExhaustive : Method::kPadding;
  double best_cost = kInf;
  for (const auto& start : starts) {
    const Allocation refined = refine_feasible(instance, start);
    if (refined.sum() < best_cost - 1e-12) {
      best_cost = refined.sum();
      report.theta = refined;
    }
  }
  report.certificate.tight = tight_constraints(instance, report.theta);
  attach_verdicts(instance, report);
  return report;
}

SolveReport optimal_stable_eq(const Instance& instance, const StableEqOptions& options) {
  if (instance.space.is_integer()) {
    const EquilibriumSearchResult search = exhaustive_equilibrium_search(instance);
    if (search.stable.empty()) {
      throw SolverError("optimal_stable_eq: no stable equilibrium exists on the grid (" +
                        std::to_string(search.feasible_count) + " feasible points)");
    }
    const GridPoint* best = nullptr;
    for (const auto& p : search.stable) {
      if (best == nullptr || p.sum() < best->sum()) best = &p;
    }
    SolveReport report;
    report.method = Method::kExhaustive;
    report.status = SolveStatus::kOptimal;
    report.theta = best->cast<double>();
    attach_verdicts(instance, report);
    return report;
  }
  if (instance.linear()) return optimal_stable_eq_linear(instance, options);
  return coverage_stable_search(instance);
}

SolveReport optimal_envy_free(const Instance& instance) {
  if (instance.space.is_integer()) {
    const Eigen::VectorXi upper = instance.space.upper->array().round().cast<int>();
    (void)grid_size(upper, kDefaultGridCap);
    std::optional<Allocation> best;
    for_each_grid_point(upper, [&](const GridPoint& p) {
      const Allocation theta = p.cast<double>();
      if (best && theta.sum() >= best->sum()) return;
      if (is_envy_free(instance, theta).envy_free.value_or(false)) best = theta;
    });
    if (!best) throw SolverError("optimal_envy_free: no envy-free grid point");
    SolveReport report;
    report.method = Method::kExhaustive;
    report.status = SolveStatus::kOptimal;
    report.theta = *best;
    attach_verdicts(instance, report);
    return report;
  }
  SolveReport best = optimal_uniform_envy_free(instance);
  if (const auto* lin = instance.linear(); lin != nullptr && lin->agents() <= StableEqOptions{}.enumeration_cap) {
    SolveReport eq = optimal_stable_eq_linear(instance);
    if (eq.verified_envy_free && eq.cost < best.cost - 1e-12) {
      eq.heuristic = true;
      eq.status = SolveStatus::kHeuristic;
      best = std::move(eq);
    }
  }
  return best;
}

}  // namespace fedgame
