#include "fedgame/coverage.hpp"

#include <algorithm>
#include <vector>

namespace fedgame {

namespace {

constexpr double kUnderflowGuard = 1e-300;

// Accumulates a product of factors in [0, 1], switching to log space once a
// factor would push the running product toward underflow.
class ProductAccumulator {
 public:
  void multiply(double factor) {
    if (factor <= 0.0) {
      zero_ = true;
      return;
    }
    if (factor < kUnderflowGuard) use_log_ = true;
    log_sum_ += std::log(factor);
    direct_ *= factor;
  }
  double value() const {
    if (zero_) return 0.0;
    return use_log_ ? std::exp(log_sum_) : direct_;
  }

 private:
  double direct_ = 1.0;
  double log_sum_ = 0.0;
  bool use_log_ = false;
  bool zero_ = false;
};

void check_allocation(const CoverageModel& model, const Allocation& theta) {
  if (theta.size() != model.agents()) {
    throw ValidationError("coverage: allocation has " + std::to_string(theta.size()) +
                          " entries, model has " + std::to_string(model.agents()) + " agents");
  }
  if ((theta.array() < 0.0).any()) throw ValidationError("coverage: negative contribution");
}

// miss(x) = prod_{j != skip} g(q_jx, theta_j); skip < 0 keeps every agent.
std::vector<double> miss_probabilities(const CoverageModel& model, const Allocation& theta,
                                       Eigen::Index skip) {
  std::vector<double> miss(static_cast<std::size_t>(model.points()));
  for (Eigen::Index x = 0; x < model.points(); ++x) {
    ProductAccumulator acc;
    for (Eigen::Index j = 0; j < model.agents(); ++j) {
      if (j == skip) continue;
      acc.multiply(rounding_factor(model.Q(j, x), theta(j)));
    }
    miss[static_cast<std::size_t>(x)] = acc.value();
  }
  return miss;
}

}  // namespace

CoverageModel make_coverage_model(Eigen::MatrixXd Q) {
  if (Q.rows() == 0 || Q.cols() == 0) throw ValidationError("coverage model: empty Q");
  if (!Q.allFinite()) throw ValidationError("coverage model: Q has non-finite entries");
  if ((Q.array() < 0.0).any() || (Q.array() > 1.0).any()) {
    throw ValidationError("coverage model: Q entries must lie in [0, 1]");
  }
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    if (std::abs(Q.row(i).sum() - 1.0) > 1e-9) {
      throw ValidationError("coverage model: row " + std::to_string(i) + " does not sum to 1");
    }
  }
  return CoverageModel{std::move(Q)};
}

Eigen::VectorXd eval_coverage(const CoverageModel& model, const Allocation& theta) {
  check_allocation(model, theta);
  const auto miss = miss_probabilities(model, theta, -1);
  Eigen::VectorXd u(model.agents());
  for (Eigen::Index i = 0; i < model.agents(); ++i) {
    double lost = 0.0;
    for (Eigen::Index x = 0; x < model.points(); ++x) {
      lost += model.Q(i, x) * miss[static_cast<std::size_t>(x)];
    }
    u(i) = 1.0 - 0.5 * lost;
  }
  return u;
}

double coverage_utility(const CoverageModel& model, const Allocation& theta, Eigen::Index agent) {
  check_allocation(model, theta);
  double lost = 0.0;
  for (Eigen::Index x = 0; x < model.points(); ++x) {
    const double q = model.Q(agent, x);
    if (q == 0.0) continue;
    ProductAccumulator acc;
    for (Eigen::Index j = 0; j < model.agents(); ++j) {
      acc.multiply(rounding_factor(model.Q(j, x), theta(j)));
    }
    lost += q * acc.value();
  }
  return 1.0 - 0.5 * lost;
}

double best_response_coverage(const CoverageModel& model, double mu, Eigen::Index agent,
                              const Allocation& theta, double upper) {
  if (agent < 0 || agent >= model.agents()) throw ValidationError("coverage: agent out of range");
  Allocation others = theta;
  others(agent) = 0.0;
  check_allocation(model, others);

  // On the support of q_agent, u(x) = 1 - 1/2 sum_x a_x g(q_x, x).
  const auto miss = miss_probabilities(model, others, agent);
  std::vector<double> weight;
  std::vector<double> q;
  double q_min = 1.0;
  for (Eigen::Index x = 0; x < model.points(); ++x) {
    const double qx = model.Q(agent, x);
    if (qx == 0.0) continue;
    weight.push_back(qx * miss[static_cast<std::size_t>(x)]);
    q.push_back(qx);
    q_min = std::min(q_min, qx);
  }
  auto utility_at = [&](double t) {
    double lost = 0.0;
    for (std::size_t s = 0; s < q.size(); ++s) lost += weight[s] * std::pow(1.0 - q[s], t);
    return 1.0 - 0.5 * lost;
  };

  if (utility_at(0.0) >= mu) return 0.0;

  // Smallest integer t with u(t) >= mu. For mu < 1, u(t) >= 1 - (1 - q_min)^t / 2
  // bounds the search; mu >= 1 is reachable only through point masses.
  double t_max;
  if (mu >= 1.0 || q_min >= 1.0) {
    t_max = 1.0;
  } else {
    t_max = std::ceil(std::log(2.0 * (1.0 - mu)) / std::log(1.0 - q_min)) + 1.0;
    t_max = std::max(t_max, 1.0);
  }
  if (utility_at(t_max) < mu) {
    throw ValidationError("coverage: requirement " + std::to_string(mu) + " of agent " +
                          std::to_string(agent) + " is unattainable");
  }
  double lo = 0.0;  // u(lo) < mu
  double hi = t_max;  // u(hi) >= mu
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (utility_at(mid) >= mu) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double u_lo = utility_at(lo);
  const double u_hi = utility_at(hi);
  const double frac = std::clamp((mu - u_lo) / (u_hi - u_lo), 0.0, 1.0);
  const double x = lo + frac;
  if (x > upper) {
    throw ValidationError("coverage: requirement of agent " + std::to_string(agent) +
                          " needs " + std::to_string(x) + " samples, above the bound " +
                          std::to_string(upper));
  }
  return x;
}

}  // namespace fedgame
