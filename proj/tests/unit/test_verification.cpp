#include "fedgame/generators.hpp"
#include "fedgame/verification.hpp"

#include <doctest.h>

using namespace fedgame;

namespace {

Instance two_uniform() {
  return make_instance(make_coverage_model(Eigen::MatrixXd::Constant(2, 2, 0.5)),
                       Eigen::VectorXd::Constant(2, 0.75), {});
}

Allocation matching(int m) {
  Allocation t = Allocation::Zero(6);
  const auto pair = k4_perfect_matchings()[static_cast<std::size_t>(m)];
  t(pair.first) = t(pair.second) = 1.0;
  return t;
}

}  // namespace

TEST_CASE("vertices of the coverage pair are stable, the midpoint is infeasible") {
  const Instance inst = two_uniform();
  CHECK(is_stable_equilibrium(inst, Eigen::Vector2d(1, 0)).stable.value());
  CHECK(is_stable_equilibrium(inst, Eigen::Vector2d(0, 1)).stable.value());
  const Verdict mid = is_stable_equilibrium(inst, Eigen::Vector2d(0.5, 0.5));
  CHECK_FALSE(mid.feasible);
  REQUIRE_FALSE(mid.violations.empty());
  CHECK(mid.violations[0].kind == ViolationKind::kInfeasible);
  CHECK(mid.violations[0].magnitude == doctest::Approx(1.0 / 32.0));
}

TEST_CASE("over-contribution is not stable") {
  const Verdict v = is_stable_equilibrium(two_uniform(), Eigen::Vector2d(1, 1));
  CHECK(v.feasible);
  CHECK_FALSE(v.stable.value());
  CHECK(v.violations.size() == 2);
  CHECK(v.violations[0].kind == ViolationKind::kProfitableReduction);
}

TEST_CASE("matching instance: matched allocation is envy-free") {
  const Instance inst = gen_matching_k4();
  for (int m = 0; m < 3; ++m) {
    const Allocation t = matching(m);
    const Eigen::VectorXd u = evaluate(inst, t);
    for (int i = 0; i < 6; ++i) {
      const double expect = t(i) > 0 ? 2.0 / 3.0 : 11.0 / 18.0;
      CHECK(std::abs(u(i) - expect) <= 1e-12);
    }
    CHECK(is_envy_free(inst, t).envy_free.value());
  }
}

TEST_CASE("matching instance: 0.9/0.1 mixture has envy") {
  const Instance inst = gen_matching_k4();
  const Allocation mix = 0.9 * matching(0) + 0.1 * matching(1);
  const Verdict v = is_envy_free(inst, mix);
  CHECK(v.feasible);
  CHECK_FALSE(v.envy_free.value());
  bool saw = false;
  for (const auto& e : v.violations) {
    if (e.kind == ViolationKind::kEnvy && e.agent == 1 && e.other == 5) saw = true;
  }
  CHECK(saw);
}

TEST_CASE("integer spaces use unit decrements and in-box swaps") {
  const Instance pac = gen_pac_cycle(1, 0.8);
  // (1,1,0): agent 1 can drop to 0 since agent 0 covers her
  const Verdict v = is_stable_equilibrium(pac, Eigen::Vector3d(1, 1, 0));
  CHECK(v.feasible);
  CHECK_FALSE(v.stable.value());
  CHECK(v.violations[0].agent == 1);
}

TEST_CASE("verify fills both verdicts") {
  const Verdict v = verify(two_uniform(), Eigen::Vector2d(1, 0));
  REQUIRE(v.stable);
  REQUIRE(v.envy_free);
  CHECK(*v.stable);
  // agent 0 would still meet 3/4 after swapping with agent 1
  CHECK_FALSE(*v.envy_free);
}

TEST_CASE("prices on small linear games") {
  const Instance flower = gen_flower(4, FlowerVariant::kLinear);
  const PriceReport pos = price_of_stability(flower);
  CHECK(pos.ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(pos.opt_exact);
  CHECK(pos.eq_exact);
  CHECK_FALSE(pos.lower_bound_only);
  const PriceReport pof = price_of_fairness(flower);
  CHECK(pof.ratio == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(pof.lower_bound_only);
  // PoF is at least (b/2)/sqrt(b) = 1
  CHECK(pof.ratio >= 1.0);
}

TEST_CASE("violation kind names") {
  CHECK(std::string(to_string(ViolationKind::kEnvy)) == "envy");
  CHECK(std::string(to_string(ViolationKind::kProfitableReduction)) == "profitable-reduction");
}
