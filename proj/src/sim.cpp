#include "fedgame/sim.hpp"

#include "fedgame/parallel.hpp"

#include <cmath>
#include <random>
#include <string>

namespace fedgame {

const char* to_string(SimAlgorithm alg) {
  return alg == SimAlgorithm::kFedAvg ? "fedavg" : "mwfed";
}

void validate(const SimConfig& config) {
  if (config.rounds < 1) throw ValidationError("simulation: rounds must be at least 1");
  if (!(config.budget > 0.0) || !std::isfinite(config.budget)) {
    throw ValidationError("simulation: budget must be positive");
  }
  if (!(config.factor > 1.0) || !std::isfinite(config.factor)) {
    throw ValidationError("simulation: factor must exceed 1");
  }
  if (config.floor_batches && !(config.batch > 0.0)) {
    throw ValidationError("simulation: batch must be positive");
  }
}

namespace {

double floor_share(const SimConfig& config, double share) {
  if (!config.floor_batches) return share;
  return std::floor(share / config.batch + 1e-12) * config.batch;
}

SimTrace simulate(const SimConfig& config, SimAlgorithm alg) {
  validate(config);
  const Eigen::Index k = config.instance.agents();
  const int T = config.rounds;
  SimTrace trace;
  trace.contributions.resize(k, T);
  trace.cumulative.resize(k, T);
  trace.weights.resize(k, T);
  trace.satisfied.resize(k, T);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  Eigen::VectorXd cum = Eigen::VectorXd::Zero(k);
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXd share(k);
    const bool uniform = alg == SimAlgorithm::kFedAvg || (w.array() == w(0)).all();
    // equal weights reduce to the FedAvg share, bit for bit
    if (uniform) {
      share.setConstant(config.budget / static_cast<double>(k));
    } else {
      share = config.budget * (w / w.sum());
    }
    for (Eigen::Index i = 0; i < k; ++i) share(i) = floor_share(config, share(i));

    trace.weights.col(t) = w;
    trace.contributions.col(t) = share;
    cum += share;
    trace.cumulative.col(t) = cum;
    const Eigen::VectorXd u = evaluate(config.instance, cum);
    for (Eigen::Index i = 0; i < k; ++i) {
      const bool sat = u(i) >= config.instance.mu(i) - kFeasibilityTol;
      trace.satisfied(i, t) = sat ? 1 : 0;
      if (alg == SimAlgorithm::kMwFed && !sat) w(i) *= config.factor;
    }
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (trace.satisfied(i, T - 1)) trace.final_satisfied.push_back(i);
  }
  return trace;
}

}  // namespace

SimTrace run_fedavg(const SimConfig& config) { return simulate(config, SimAlgorithm::kFedAvg); }

SimTrace run_mwfed(const SimConfig& config) { return simulate(config, SimAlgorithm::kMwFed); }

SimTrace run_schedule(const SimConfig& config, SimAlgorithm alg) { return simulate(config, alg); }

std::vector<DefectionPoint> defection_curve(const SimConfig& config, SimAlgorithm alg,
                                            const std::vector<double>& levels, int trials) {
  if (trials < 1) throw ValidationError("defection_curve: trials must be at least 1");
  for (double level : levels) {
    if (!(level > 0.0 && level <= 1.0)) {
      throw ValidationError("defection_curve: level " + std::to_string(level) + " outside (0, 1]");
    }
  }
  const SimTrace base = simulate(config, alg);
  const Eigen::Index k = config.instance.agents();
  const Eigen::VectorXd total = base.cumulative.col(config.rounds - 1);

  std::mt19937_64 rng(config.seed);
  std::vector<Eigen::Index> defectors(static_cast<std::size_t>(trials));
  for (auto& d : defectors) d = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(k));

  // the schedule ignores the defector, so only the final totals matter
  Eigen::MatrixXi hit(static_cast<Eigen::Index>(levels.size()), k);
  const std::size_t jobs = levels.size() * static_cast<std::size_t>(k);
  parallel_for(jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t job = begin; job < end; ++job) {
      const auto l = static_cast<Eigen::Index>(job / static_cast<std::size_t>(k));
      const auto i = static_cast<Eigen::Index>(job % static_cast<std::size_t>(k));
      Eigen::VectorXd theta = total;
      theta(i) *= levels[static_cast<std::size_t>(l)];
      const double u = evaluate(config.instance, theta)(i);
      hit(l, i) = u >= config.instance.mu(i) - kFeasibilityTol ? 1 : 0;
    }
  });

  std::vector<DefectionPoint> curve;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    int count = 0;
    for (Eigen::Index d : defectors) count += hit(static_cast<Eigen::Index>(l), d);
    curve.push_back({levels[l], static_cast<double>(count) / trials});
  }
  return curve;
}

}  // namespace fedgame
