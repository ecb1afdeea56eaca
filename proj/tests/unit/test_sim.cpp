#include "fedgame/generators.hpp"
#include "fedgame/sim.hpp"

#include <doctest.h>

using namespace fedgame;

namespace {

SimConfig identity_config(int k, double budget, int rounds) {
  SimConfig c{make_instance(make_linear_model(Eigen::MatrixXd::Identity(k, k)), Eigen::VectorXd::Ones(k), {}),
              rounds, budget, 2.0, 0, false, 1.0};
  return c;
}

}  // namespace

TEST_CASE("fedavg on the identity: everyone satisfied at round 4") {
  const SimTrace t = run_fedavg(identity_config(3, 0.75, 6));
  for (int i = 0; i < 3; ++i) {
    CHECK(t.satisfied(i, 2) == 0);
    CHECK(t.satisfied(i, 3) == 1);
  }
  CHECK(t.final_satisfied.size() == 3);
}

TEST_CASE("symmetric games: mwfed trace equals fedavg exactly") {
  for (int k : {3, 4, 7}) {
    const SimConfig c = identity_config(k, 0.3, 12);
    const SimTrace a = run_fedavg(c);
    const SimTrace m = run_mwfed(c);
    CHECK(a.contributions == m.contributions);
    CHECK(a.cumulative == m.cumulative);
    CHECK(a.satisfied == m.satisfied);
  }
}

TEST_CASE("mwfed shifts load to the unsatisfied agent") {
  // agent 0 is satisfied after round 1, agent 1 is not
  SimConfig c{make_instance(make_linear_model(Eigen::MatrixXd::Identity(2, 2)), Eigen::Vector2d(0.5, 5), {}),
              5, 1.0, 2.0, 0, false, 1.0};
  const SimTrace t = run_mwfed(c);
  CHECK(t.satisfied(0, 0) == 1);
  CHECK(t.satisfied(1, 0) == 0);
  for (int r = 1; r < 5; ++r) CHECK(t.contributions(1, r) > 0.5);
  CHECK(t.contributions(1, 1) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("flower: core share decays once satisfied") {
  SimConfig c{gen_flower(4, FlowerVariant::kLinear), 8, 1.0, 2.0, 0, false, 1.0};
  const SimTrace t = run_mwfed(c);
  int first = -1;
  for (int r = 0; r < 8 && first < 0; ++r) {
    if (t.satisfied(0, r)) first = r;
  }
  REQUIRE(first >= 0);
  if (first + 2 < 8) {
    const double s1 = t.contributions(0, first + 1) / t.contributions.col(first + 1).sum();
    const double s2 = t.contributions(0, first + 2) / t.contributions.col(first + 2).sum();
    CHECK(s2 <= s1 + 1e-15);
  }
}

TEST_CASE("budget conservation and monotone cumulative") {
  SimConfig c{gen_heterogeneous(3), 20, 0.2, 2.0, 0, false, 1.0};
  for (auto alg : {SimAlgorithm::kFedAvg, SimAlgorithm::kMwFed}) {
    const SimTrace t = run_schedule(c, alg);
    for (int r = 0; r < 20; ++r) {
      CHECK(std::abs(t.contributions.col(r).sum() - 0.2) <= 1e-9);
      if (r > 0) CHECK((t.cumulative.col(r).array() >= t.cumulative.col(r - 1).array()).all());
    }
  }
}

TEST_CASE("flooring shares to whole batches") {
  SimConfig c = identity_config(3, 10.0, 2);
  c.floor_batches = true;
  c.batch = 3.0;
  const SimTrace t = run_fedavg(c);
  CHECK(t.contributions(0, 0) == 3.0);
}

TEST_CASE("config validation") {
  SimConfig c = identity_config(2, 1.0, 0);
  CHECK_THROWS_AS(run_fedavg(c), ValidationError);
  c.rounds = 3;
  c.factor = 1.0;
  CHECK_THROWS_AS(run_mwfed(c), ValidationError);
  c.factor = 2.0;
  c.budget = -1;
  CHECK_THROWS_AS(run_mwfed(c), ValidationError);
  c.budget = 1;
  CHECK_THROWS_AS(defection_curve(c, SimAlgorithm::kFedAvg, {0.0}, 3), ValidationError);
  CHECK_THROWS_AS(defection_curve(c, SimAlgorithm::kFedAvg, {0.5}, 0), ValidationError);
}

TEST_CASE("defection at full level keeps everyone satisfied") {
  const SimConfig c = identity_config(3, 1.2, 4);
  const auto curve = defection_curve(c, SimAlgorithm::kFedAvg, {0.5, 1.0}, 50);
  CHECK(curve[1].fraction == 1.0);
  CHECK(curve[0].fraction == 0.0);
}
