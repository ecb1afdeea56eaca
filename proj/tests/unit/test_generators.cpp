#include "fedgame/generators.hpp"
#include "fedgame/io.hpp"
#include "fedgame/verification.hpp"

#include <doctest.h>

using namespace fedgame;

TEST_CASE("flower linear b=4 matrix") {
  const Instance inst = gen_flower(4, FlowerVariant::kLinear);
  const auto& W = inst.linear()->W;
  REQUIRE(W.rows() == 5);
  CHECK(W(0, 0) == 1.0);
  for (int i = 1; i <= 4; ++i) CHECK(W(0, i) == 0.5);
  CHECK(W(1, 2) == 0.5);
  CHECK(W(3, 4) == 0.5);
  CHECK(W(1, 3) == 0.0);
  CHECK(inst.warnings.empty());
  // core alone at 2 serves every petal
  Allocation t = Allocation::Zero(5);
  t(0) = 2;
  const Eigen::VectorXd u = evaluate(inst, t);
  for (int i = 1; i <= 4; ++i) CHECK(u(i) == doctest::Approx(1.0));
}

TEST_CASE("flower linear reproduces the closed-form utilities") {
  const int b = 9;
  const Instance inst = gen_flower(b, FlowerVariant::kLinear);
  Allocation t(b + 1);
  for (int i = 0; i <= b; ++i) t(i) = 0.1 * (i + 1);
  const Eigen::VectorXd u = evaluate(inst, t);
  double core = t(0);
  for (int i = 1; i <= b; ++i) core += t(i) / 3.0;
  CHECK(u(0) == doctest::Approx(core));
  for (int i = 1; i <= b; ++i) {
    double expect = t(i) + t(0) / 3.0;
    for (int l = 1; l <= b; ++l) {
      if (l != i && flower_group(b, l) == flower_group(b, i)) expect += t(l) / 3.0;
    }
    CHECK(u(i) == doctest::Approx(expect));
  }
}

TEST_CASE("flower coverage shape and core-only solution") {
  const Instance four = gen_flower(4, FlowerVariant::kCoverage);
  CHECK(four.coverage()->Q.cols() == 4 + 4 * 2);
  const Instance nine = gen_flower(9, FlowerVariant::kCoverage);
  CHECK(nine.agents() == 10);
  CHECK(nine.mu(0) == doctest::Approx(0.5 + 1.0 / 18.0));
  for (int b : {4, 9}) {
    const Instance inst = gen_flower(b, FlowerVariant::kCoverage);
    const double rb = std::sqrt(b);
    const double t0 = std::ceil(std::log(1 - 1 / rb) / std::log(1 - 1.0 / b));
    Allocation t = Allocation::Zero(b + 1);
    t(0) = t0;
    CHECK(is_feasible(inst, t));
    t(0) = t0 - 1;
    CHECK_FALSE(is_feasible(inst, t));
  }
}

TEST_CASE("flower argument checks") {
  CHECK_THROWS_AS(gen_flower(5, FlowerVariant::kLinear), ValidationError);
  CHECK_THROWS_AS(gen_flower(1, FlowerVariant::kLinear), ValidationError);
  CHECK_THROWS_AS(gen_flower(289, FlowerVariant::kCoverage), ValidationError);
  CHECK(flower_group(9, 4) == 1);
}

TEST_CASE("pac-cycle parity adjustment") {
  // d = 4, mu = 0.8: m = ceil(log 0.4 / log 0.75) = 4, even, so mu moves to 0.85
  CHECK(pac_cycle_threshold(4, 0.8) == 4);
  const Instance four = gen_pac_cycle(4, 0.8);
  CHECK(four.mu(0) == doctest::Approx(0.85));
  CHECK(pac_cycle_threshold(4, four.mu(0)) == 5);
  CHECK(four.tabular()->upper(0) == 6);
  const Instance eight = gen_pac_cycle(8, 0.8);
  CHECK(pac_cycle_threshold(8, eight.mu(0)) == 7);
  CHECK(eight.mu(0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(gen_pac_cycle(4, 0.4), ValidationError);
  for (int d : {2, 3, 4, 5, 8}) {
    const Instance g = gen_pac_cycle(d, 0.7);
    CHECK(pac_cycle_threshold(d, g.mu(0)) % 2 == 1);
  }
}

TEST_CASE("matching instance layout") {
  const Instance inst = gen_matching_k4();
  CHECK(inst.agents() == 6);
  CHECK(inst.coverage()->Q.cols() == 10);
  for (int i = 0; i < 6; ++i) CHECK(inst.coverage()->Q.row(i).sum() == doctest::Approx(1.0));
  CHECK(inst.mu(0) == 0.6);
}

TEST_CASE("random PSD is deterministic and well formed") {
  const Instance a = gen_random_psd(3, 42, Dominance::kNone);
  const Instance b = gen_random_psd(3, 42, Dominance::kNone);
  CHECK(dump_json(instance_to_json(a)) == dump_json(instance_to_json(b)));
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Instance inst = gen_random_psd(6, s, Dominance::kNone);
    CHECK(inst.linear()->psd);
    CHECK(inst.warnings.empty());
    const Instance dd = gen_random_psd(6, s, Dominance::kDiagonal);
    CHECK(is_diagonally_dominant(*dd.linear()));
    CHECK(dd.linear()->psd);
  }
}

TEST_CASE("heterogeneous instance couplings") {
  const Instance inst = gen_heterogeneous(1);
  const auto& W = inst.linear()->W;
  CHECK(W(0, 1) > W(2, 3));
  CHECK(W.row(0).sum() > W.row(2).sum());
  CHECK(inst.linear()->psd);
}
