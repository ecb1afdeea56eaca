#include "fedgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fedgame {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double upper_bound_of(const Instance& instance, Eigen::Index agent) {
  if (!instance.space.upper) return std::numeric_limits<double>::infinity();
  return (*instance.space.upper)(agent);
}

std::string agent_str(Eigen::Index agent) { return "agent " + std::to_string(agent); }

// Smallest integer x in [0, upper] with u_agent(x, theta_{-agent}) >= mu - tol.
double integer_best_response(const Instance& instance, const Allocation& theta,
                             Eigen::Index agent) {
  const double upper = upper_bound_of(instance, agent);
  Allocation probe = theta;
  for (double x = 0.0; x <= upper; x += 1.0) {
    probe(agent) = x;
    if (evaluate(instance, probe)(agent) >= instance.mu(agent) - kFeasibilityTol) return x;
  }
  throw ValidationError("requirement of " + agent_str(agent) +
                        " is unattainable within the strategy space");
}

}  // namespace

Eigen::Index agent_count(const UtilityModel& model) {
  return std::visit([](const auto& m) { return m.agents(); }, model);
}

const char* model_type_name(const UtilityModel& model) {
  return std::visit(Overloaded{[](const LinearModel&) { return "linear"; },
                               [](const CoverageModel&) { return "coverage"; },
                               [](const TabularModel&) { return "tabular"; }},
                    model);
}

Instance make_instance(UtilityModel model, Eigen::VectorXd mu, StrategySpace space,
                       std::string label) {
  const Eigen::Index k = agent_count(model);
  if (mu.size() != k) {
    throw ValidationError("instance: mu has " + std::to_string(mu.size()) +
                          " entries, model has " + std::to_string(k) + " agents");
  }
  if (!mu.allFinite()) throw ValidationError("instance: mu has non-finite entries");

  if (const auto* tab = std::get_if<TabularModel>(&model)) {
    if (!space.is_integer()) {
      throw ValidationError("instance: tabular models require an integer strategy space");
    }
    const Eigen::VectorXd model_upper = tab->upper.cast<double>();
    if (!space.upper) {
      space.upper = model_upper;
    } else if (space.upper->size() != k || (space.upper->array() > model_upper.array()).any()) {
      throw ValidationError("instance: space upper bounds exceed the tabulated grid");
    }
  }
  if (space.is_integer() && !space.upper) {
    throw ValidationError("instance: integer strategy space needs per-agent upper bounds");
  }
  if (space.upper) {
    const auto& upper = *space.upper;
    if (upper.size() != k) {
      throw ValidationError("instance: space upper has " + std::to_string(upper.size()) +
                            " entries, expected " + std::to_string(k));
    }
    if ((upper.array() < 0.0).any()) throw ValidationError("instance: negative upper bound");
    if (space.is_integer()) {
      for (Eigen::Index i = 0; i < k; ++i) {
        if (!std::isfinite(upper(i)) || std::abs(upper(i) - std::round(upper(i))) > kIntegralityTol) {
          throw ValidationError("instance: integer upper bound of " + agent_str(i) +
                                " must be a finite integer");
        }
      }
    }
  }

  Instance instance{std::move(model), std::move(mu), std::move(space), std::move(label), {}};

  if (const auto* lin = instance.linear()) {
    if (!lin->psd) {
      std::ostringstream os;
      os << "linear W is not PSD (min eigenvalue " << lin->min_eigenvalue
         << "); the stable-equilibrium program assumes PSD";
      instance.warnings.push_back(os.str());
    }
    if ((lin->W.array() > 1.0 + kSymmetryTol).any()) {
      instance.warnings.push_back("linear W has entries above 1");
    }
  }

  for (Eigen::Index i = 0; i < k; ++i) {
    try {
      (void)solo_requirement(instance, i);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("instance: requirement not individually attainable: ") +
                            e.what());
    }
  }
  return instance;
}

void check_in_space(const Instance& instance, const Allocation& theta) {
  const Eigen::Index k = instance.agents();
  if (theta.size() != k) {
    throw ValidationError("allocation has " + std::to_string(theta.size()) +
                          " entries, instance has " + std::to_string(k) + " agents");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    const double v = theta(i);
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("allocation entry of " + agent_str(i) + " must be finite and >= 0");
    }
    if (instance.space.is_integer() && std::abs(v - std::round(v)) > kIntegralityTol) {
      throw ValidationError("allocation entry of " + agent_str(i) +
                            " is not integral in an integer strategy space");
    }
    if (instance.space.upper && v > (*instance.space.upper)(i) + kIntegralityTol) {
      throw ValidationError("allocation entry of " + agent_str(i) + " exceeds its upper bound");
    }
  }
}

bool in_space(const Instance& instance, const Allocation& theta) {
  try {
    check_in_space(instance, theta);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

Eigen::VectorXd evaluate(const Instance& instance, const Allocation& theta) {
  check_in_space(instance, theta);
  return std::visit(
      Overloaded{[&](const LinearModel& m) -> Eigen::VectorXd { return eval_linear(m, theta); },
                 [&](const CoverageModel& m) -> Eigen::VectorXd {
                   if (instance.space.is_integer()) return eval_coverage(m, theta.array().round().matrix());
                   return eval_coverage(m, theta);
                 },
                 [&](const TabularModel& m) -> Eigen::VectorXd { return eval_tabular(m, theta); }},
      instance.model);
}

bool is_feasible(const Instance& instance, const Allocation& theta, double tol) {
  const Eigen::VectorXd u = evaluate(instance, theta);
  return ((u - instance.mu).array() >= -tol).all();
}

double best_response(const Instance& instance, const Allocation& theta, Eigen::Index agent) {
  if (agent < 0 || agent >= instance.agents()) throw ValidationError("agent index out of range");
  if (theta.size() != instance.agents()) {
    throw ValidationError("allocation has " + std::to_string(theta.size()) +
                          " entries, instance has " + std::to_string(instance.agents()) + " agents");
  }
  if (instance.space.is_integer()) return integer_best_response(instance, theta, agent);

  const double mu = instance.mu(agent);
  const double upper = upper_bound_of(instance, agent);
  double x = 0.0;
  if (const auto* lin = instance.linear()) {
    const double others = lin->W.row(agent).dot(theta) - lin->W(agent, agent) * theta(agent);
    x = std::max(0.0, (mu - others) / lin->W(agent, agent));
    if (x > upper + kIntegralityTol) {
      throw ValidationError("requirement of " + agent_str(agent) + " needs " + std::to_string(x) +
                            ", above the upper bound " + std::to_string(upper));
    }
  } else if (const auto* cov = instance.coverage()) {
    x = best_response_coverage(*cov, mu, agent, theta, upper + kIntegralityTol);
  } else {
    return integer_best_response(instance, theta, agent);
  }
  return x;
}

double solo_requirement(const Instance& instance, Eigen::Index agent) {
  return best_response(instance, Allocation::Zero(instance.agents()), agent);
}

WellBehavedEstimate check_well_behaved(const Instance& instance, const Eigen::VectorXd& box_upper,
                                       int grid) {
  if (instance.tabular() || instance.space.is_integer()) {
    throw ValidationError("check_well_behaved: utilities on an integer grid are not differentiable");
  }
  const Eigen::Index k = instance.agents();
  if (box_upper.size() != k || !box_upper.allFinite() || (box_upper.array() < 0.0).any()) {
    throw ValidationError("check_well_behaved: box upper must be k finite non-negative reals");
  }
  if (grid < 1) throw ValidationError("check_well_behaved: grid must be positive");
  const double points = std::pow(static_cast<double>(grid), static_cast<double>(k));
  if (points > 1e6) throw ValidationError("check_well_behaved: grid^k exceeds 1e6 points");

  // Raw utilities; the box may leave the declared strategy space.
  auto utilities = [&](const Allocation& theta) -> Eigen::VectorXd {
    if (const auto* lin = instance.linear()) return eval_linear(*lin, theta);
    return eval_coverage(*instance.coverage(), theta);
  };

  const double h = kFiniteDifferenceStep;
  WellBehavedEstimate est{Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity()),
                          Eigen::VectorXd::Zero(k)};
  Eigen::VectorXi counter = Eigen::VectorXi::Zero(k);
  Allocation theta(k);
  const auto total = static_cast<long>(points);
  for (long n = 0; n < total; ++n) {
    for (Eigen::Index i = 0; i < k; ++i) {
      theta(i) = grid == 1 ? 0.0 : box_upper(i) * counter(i) / (grid - 1);
    }
    const Eigen::VectorXd base = utilities(theta);
    for (Eigen::Index j = 0; j < k; ++j) {
      Allocation step = theta;
      step(j) += h;
      Eigen::MatrixXd quotients(k, 2);
      quotients.col(0) = (utilities(step) - base) / h;
      int used = 1;
      if (theta(j) >= h) {
        step(j) = theta(j) - h;
        quotients.col(1) = (base - utilities(step)) / h;
        used = 2;
      }
      for (Eigen::Index i = 0; i < k; ++i) {
        const auto row = quotients.row(i).head(used);
        if (i == j) {
          est.c2_lower(i) = std::min(est.c2_lower(i), row.minCoeff());
        } else {
          est.c1_upper(i) = std::max(est.c1_upper(i), row.maxCoeff());
        }
      }
    }
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      if (++counter(i) < grid) break;
      counter(i) = 0;
    }
  }
  return est;
}

}  // namespace fedgame
