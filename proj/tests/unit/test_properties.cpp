// Randomized invariant checks, seeded.
#include "fedgame/generators.hpp"
#include "fedgame/lp.hpp"
#include "fedgame/sim.hpp"
#include "fedgame/solvers.hpp"
#include "fedgame/verification.hpp"

#include <doctest.h>

#include <random>

using namespace fedgame;

namespace {

double unif(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Eigen::MatrixXd random_rows(std::mt19937_64& rng, int k, int n) {
  Eigen::MatrixXd Q(k, n);
  for (int i = 0; i < k; ++i) {
    for (int x = 0; x < n; ++x) Q(i, x) = unif(rng) < 0.3 ? 0.0 : unif(rng);
    Q(i, i % n) += 0.05;
    Q.row(i) /= Q.row(i).sum();
  }
  return Q;
}

std::vector<Instance> model_zoo(std::mt19937_64& rng) {
  std::vector<Instance> zoo;
  zoo.push_back(gen_random_psd(4, rng(), Dominance::kNone));
  const Eigen::MatrixXd Q = random_rows(rng, 3, 4);
  zoo.push_back(make_instance(make_coverage_model(Q), Eigen::VectorXd::Constant(3, 0.6), {}));
  zoo.push_back(gen_pac_cycle(4, 0.8));
  return zoo;
}

}  // namespace

TEST_CASE("utilities are monotone in every coordinate") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    for (const Instance& inst : model_zoo(rng)) {
      const Eigen::Index k = inst.agents();
      Allocation theta(k);
      const bool grid = inst.space.is_integer();
      for (Eigen::Index i = 0; i < k; ++i) theta(i) = grid ? std::floor(unif(rng, 0, 5)) : unif(rng, 0, 3);
      const Eigen::Index j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(k));
      Allocation bumped = theta;
      bumped(j) += grid ? 1.0 : unif(rng, 0, 1.5);
      if (!in_space(inst, bumped)) continue;
      CHECK(((evaluate(inst, bumped) - evaluate(inst, theta)).array() >= -1e-10).all());
    }
  }
}

TEST_CASE("feasibility is upward closed") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = gen_random_psd(5, rng(), Dominance::kNone);
    const Allocation theta = social_opt(inst).theta;
    REQUIRE(is_feasible(inst, theta));
    Allocation more = theta;
    for (Eigen::Index i = 0; i < 5; ++i) more(i) += unif(rng, 0, 0.5);
    CHECK(is_feasible(inst, more));
  }
}

TEST_CASE("solo requirement is tight") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance cov = make_instance(make_coverage_model(random_rows(rng, 3, 5)),
                                       Eigen::VectorXd::Constant(3, unif(rng, 0.55, 0.9)), {});
    for (const Instance* inst : {&cov}) {
      for (Eigen::Index i = 0; i < inst->agents(); ++i) {
        const double x = solo_requirement(*inst, i);
        Allocation t = Allocation::Zero(inst->agents());
        t(i) = x;
        CHECK(evaluate(*inst, t)(i) >= inst->mu(i) - 1e-12);
        t(i) = x - 1e-6;
        if (t(i) >= 0) CHECK(evaluate(*inst, t)(i) < inst->mu(i));
      }
    }
  }
}

TEST_CASE("from_discovery is symmetric PSD with squared-norm diagonal") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd Q = random_rows(rng, 5, 6);
    const LinearModel m = from_discovery(Q);
    CHECK((m.W - m.W.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(m.psd);
    for (int i = 0; i < 5; ++i) {
      CHECK(m.W(i, i) == doctest::Approx(Q.row(i).squaredNorm()).epsilon(1e-14));
      CHECK(m.W(i, i) <= 1.0);
    }
  }
}

TEST_CASE("eval_linear is additive and reads columns") {
  std::mt19937_64 rng(5);
  const LinearModel m = *gen_random_psd(6, 11, Dominance::kNone).linear();
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = unif(rng, 0, 3);
      b(i) = unif(rng, 0, 3);
    }
    const Eigen::VectorXd lhs = eval_linear(m, (a + b).eval());
    const Eigen::VectorXd rhs = eval_linear(m, a) + eval_linear(m, b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
  for (int j = 0; j < 6; ++j) CHECK(eval_linear(m, Eigen::VectorXd::Unit(6, j)) == m.W.col(j));
}

TEST_CASE("coverage at integers equals the direct product formula") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::MatrixXd Q = random_rows(rng, 3, 5);
    const CoverageModel m = make_coverage_model(Q);
    Eigen::VectorXd theta(3);
    for (int i = 0; i < 3; ++i) theta(i) = std::floor(unif(rng, 0, 8));
    const Eigen::VectorXd u = eval_coverage(m, theta);
    for (int i = 0; i < 3; ++i) {
      double miss = 0.0;
      for (int x = 0; x < 5; ++x) {
        double p = Q(i, x);
        for (int j = 0; j < 3; ++j) p *= std::pow(1 - Q(j, x), theta(j));
        miss += p;
      }
      CHECK(std::abs(u(i) - (1 - 0.5 * miss)) <= 1e-12);
    }
  }
}

TEST_CASE("coverage is Lipschitz across integer breakpoints") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::MatrixXd Q = random_rows(rng, 3, 4);
    const CoverageModel m = make_coverage_model(Q);
    Eigen::VectorXd a(3);
    for (int i = 0; i < 3; ++i) a(i) = std::floor(unif(rng, 1, 5));
    const int j = trial % 3;
    for (double h : {1e-9, 1e-6, 1e-3, 0.5}) {
      Eigen::VectorXd lo = a, hi = a;
      lo(j) -= h;
      hi(j) += h;
      const double bound = 0.5 * 2 * h * Q.row(j).maxCoeff() + 1e-15;
      CHECK((eval_coverage(m, hi) - eval_coverage(m, lo)).cwiseAbs().maxCoeff() <= bound);
    }
  }
}

TEST_CASE("coverage pair is strictly below the chord") {
  const CoverageModel m = make_coverage_model(Eigen::MatrixXd::Constant(2, 2, 0.5));
  for (double a = 0.05; a < 1.0; a += 0.05) {
    const Eigen::VectorXd u = eval_coverage(m, Eigen::Vector2d(a, 1 - a));
    CHECK(u(0) < 0.75);
    CHECK(std::abs(u(0) - (0.75 - a * (1 - a) / 8)) <= 1e-12);
  }
}

TEST_CASE("coverage best response is minimal") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const CoverageModel m = make_coverage_model(random_rows(rng, 3, 4));
    const double mu = unif(rng, 0.55, 0.95);
    Eigen::VectorXd theta(3);
    for (int i = 0; i < 3; ++i) theta(i) = unif(rng, 0, 2);
    const int agent = trial % 3;
    double x = 0.0;
    try {
      x = best_response_coverage(m, mu, agent, theta);
    } catch (const ValidationError&) {
      continue;
    }
    theta(agent) = x;
    CHECK(coverage_utility(m, theta, agent) >= mu - 1e-12);
    if (x > 1e-8) {
      theta(agent) = x - 1e-8;
      CHECK(coverage_utility(m, theta, agent) < mu);
    }
  }
}

TEST_CASE("LP complementary slackness and determinism") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = gen_random_psd(2 + static_cast<int>(seed % 5), seed, Dominance::kNone);
    LpProblem p;
    p.A = inst.linear()->W;
    p.c = Eigen::VectorXd::Ones(p.A.cols());
    p.senses.assign(static_cast<std::size_t>(p.A.rows()), Sense::kGreaterEqual);
    p.b = inst.mu;
    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::kOptimal);
    const Eigen::VectorXd reduced = p.c - p.A.transpose() * s.y;
    const Eigen::VectorXd slack = p.A * s.x - p.b;
    for (Eigen::Index j = 0; j < s.x.size(); ++j) {
      if (s.x(j) > 1e-8) CHECK(std::abs(reduced(j)) <= 1e-7);
      if (slack(j) > 1e-8) CHECK(std::abs(s.y(j)) <= 1e-7);
    }
    const LpSolution again = solve_lp(p);
    CHECK(again.x == s.x);
    CHECK(again.iterations == s.iterations);
  }
}

TEST_CASE("equilibrium solver invariants on random linear games") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = gen_random_psd(2 + static_cast<int>(seed % 5), 1000 + seed, Dominance::kNone);
    const SolveReport eq = optimal_stable_eq(inst);
    const SolveReport opt = social_opt(inst);
    CHECK(eq.verified_stable);
    CHECK(is_stable_equilibrium(inst, eq.theta).stable.value());
    CHECK(is_feasible(inst, eq.theta));
    CHECK(eq.cost >= opt.cost - 1e-7 * (1 + opt.cost));
    const Allocation f = best_response_step(inst, eq.theta);
    for (Eigen::Index i = 0; i < inst.agents(); ++i) {
      Allocation t = eq.theta;
      t(i) = f(i);
      CHECK(evaluate(inst, t)(i) >= inst.mu(i) - 1e-9);
    }
  }
}

TEST_CASE("price reports never fall below 1 when exact") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PriceReport pos = price_of_stability(gen_random_psd(4, 500 + seed, Dominance::kNone));
    if (pos.opt_exact && pos.eq_exact) CHECK(pos.ratio >= 1 - 1e-9);
  }
}

TEST_CASE("every generated pac-cycle has odd m and no stable point") {
  for (int d : {2, 3, 5}) {
    for (double mu : {0.6, 0.75, 0.9}) {
      const Instance g = gen_pac_cycle(d, mu);
      CHECK(pac_cycle_threshold(d, g.mu(0)) % 2 == 1);
      CHECK(exhaustive_equilibrium_search(g).stable.empty());
    }
  }
}

TEST_CASE("stable points from exhaustive search pass verification") {
  Eigen::Matrix2d W;
  W << 1, 0.4, 0.4, 1;
  const Instance inst = make_instance(make_linear_model(W), Eigen::Vector2d(2, 3),
                                      {SpaceKind::kInteger, Eigen::Vector2d(4, 4)});
  const auto r = exhaustive_equilibrium_search(inst);
  REQUIRE_FALSE(r.stable.empty());
  for (const auto& p : r.stable) CHECK(is_stable_equilibrium(inst, p.cast<double>()).stable.value());
}

TEST_CASE("mwfed weight rules") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig c{gen_heterogeneous(seed), 25, 0.2, 1.5 + 0.1 * static_cast<double>(seed), 0, false, 1.0};
    const SimTrace t = run_mwfed(c);
    for (int r = 1; r < 25; ++r) {
      const double before = t.weights.col(r - 1).sum();
      const double after = t.weights.col(r).sum();
      for (int i = 0; i < 4; ++i) {
        if (t.satisfied(i, r - 1)) {
          CHECK(t.weights(i, r) <= t.weights(i, r - 1));
        } else {
          CHECK(t.weights(i, r) / after >= t.weights(i, r - 1) / before - 1e-15);
        }
      }
    }
  }
}

TEST_CASE("defection curves are monotone in level") {
  const std::vector<double> levels = {0.01, 0.1, 0.25, 0.4, 0.5, 0.75, 1.0};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig c{gen_heterogeneous(seed), 20, 0.2, 2.0, seed, false, 1.0};
    for (auto alg : {SimAlgorithm::kFedAvg, SimAlgorithm::kMwFed}) {
      const auto curve = defection_curve(c, alg, levels, 64);
      for (std::size_t l = 1; l < curve.size(); ++l) CHECK(curve[l].fraction >= curve[l - 1].fraction);
    }
  }
}
