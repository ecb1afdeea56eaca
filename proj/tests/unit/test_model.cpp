#include "fedgame/generators.hpp"
#include "fedgame/model.hpp"

#include "../oracles.hpp"

#include <doctest.h>

using namespace fedgame;

namespace {

Instance two_uniform() {
  return make_instance(make_coverage_model(Eigen::MatrixXd::Constant(2, 2, 0.5)),
                       Eigen::VectorXd::Constant(2, 0.75), {}, "two-uniform");
}

Instance linear2(double w) {
  Eigen::Matrix2d W;
  W << 1, w, w, 1;
  return make_instance(make_linear_model(W), Eigen::VectorXd::Ones(2), {});
}

}  // namespace

TEST_CASE("make_instance checks dimensions and attainability") {
  CHECK_THROWS_AS(make_instance(make_linear_model(Eigen::MatrixXd::Identity(2, 2)),
                                Eigen::VectorXd::Ones(3), {}),
                  ValidationError);
  // coverage cannot exceed 1 - 1/2 * (mass that nobody covers) = 1, but mu > 1 is out
  CHECK_THROWS_AS(make_instance(make_coverage_model(Eigen::MatrixXd::Constant(2, 2, 0.5)),
                                Eigen::VectorXd::Constant(2, 1.0), {}),
                  ValidationError);
  // integer space needs an upper bound
  CHECK_THROWS_AS(make_instance(make_linear_model(Eigen::MatrixXd::Identity(2, 2)),
                                Eigen::VectorXd::Ones(2), {SpaceKind::kInteger, std::nullopt}),
                  ValidationError);
  // requirement beyond the box
  CHECK_THROWS_AS(make_instance(make_linear_model(Eigen::MatrixXd::Identity(1, 1)),
                                Eigen::VectorXd::Constant(1, 5.0),
                                {SpaceKind::kInteger, Eigen::VectorXd::Constant(1, 3)}),
                  ValidationError);
}

TEST_CASE("non-PSD W loads with a warning") {
  Eigen::Matrix2d W;
  W << 1, 0.9, 0.9, 0.5;
  const Instance inst = make_instance(make_linear_model(W), Eigen::VectorXd::Constant(2, 0.1), {});
  CHECK_FALSE(inst.warnings.empty());
}

TEST_CASE("check_in_space") {
  const Instance inst = linear2(0.5);
  CHECK_NOTHROW(check_in_space(inst, Eigen::Vector2d(1, 2)));
  CHECK_THROWS_AS(check_in_space(inst, Eigen::Vector2d(-1, 2)), ValidationError);
  CHECK_THROWS_AS(check_in_space(inst, Eigen::Vector3d(1, 2, 3)), ValidationError);
  const Instance pac = gen_pac_cycle(1, 0.8);
  CHECK(in_space(pac, Eigen::Vector3d(1, 0, 1)));
  CHECK_FALSE(in_space(pac, Eigen::Vector3d(0.5, 0, 1)));
  CHECK_FALSE(in_space(pac, Eigen::Vector3d(2, 0, 1)));
}

TEST_CASE("is_feasible") {
  const Instance pac = gen_pac_cycle(1, 0.8);
  CHECK(is_feasible(pac, Eigen::Vector3d(1, 1, 0)));
  CHECK_FALSE(is_feasible(pac, Eigen::Vector3d(1, 0, 0)));
  CHECK_FALSE(is_feasible(two_uniform(), Eigen::Vector2d(0.5, 0.5)));
  CHECK(is_feasible(two_uniform(), Eigen::Vector2d(1, 0)));
}

TEST_CASE("best_response closed forms") {
  const Instance lin = linear2(0.5);
  CHECK(best_response(lin, Eigen::Vector2d(0, 1), 0) == doctest::Approx(0.5));
  CHECK(best_response(lin, Eigen::Vector2d(0, 3), 0) == 0.0);
  const Instance cov = two_uniform();
  CHECK(best_response(cov, Eigen::Vector2d(0, 0), 0) == doctest::Approx(1.0));
  CHECK(best_response(cov, Eigen::Vector2d(0, 1), 0) == 0.0);
}

TEST_CASE("best_response matches bisection on random linear games") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Instance inst = gen_random_psd(4, s, Dominance::kNone);
    Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(4, 0.0, 0.3);
    for (int i = 0; i < 4; ++i) {
      CHECK(best_response(inst, theta, i) ==
            doctest::Approx(oracle::bisect_best_response(inst, theta, i, 10.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("solo requirement") {
  CHECK(solo_requirement(linear2(0.5), 0) == doctest::Approx(1.0));
  CHECK(solo_requirement(two_uniform(), 1) == doctest::Approx(1.0));
  CHECK(solo_requirement(gen_pac_cycle(1, 0.8), 0) == 1.0);
}

TEST_CASE("well-behavedness on the two-agent coverage game") {
  const auto est = check_well_behaved(two_uniform(), Eigen::Vector2d(2, 2), 9);
  for (int i = 0; i < 2; ++i) {
    CHECK(est.c1_upper(i) <= 0.5 + 1e-6);
    CHECK(est.c2_lower(i) > 0.0);
  }
  CHECK_THROWS_AS(check_well_behaved(gen_pac_cycle(1, 0.8), Eigen::Vector3d::Ones(), 3), ValidationError);
}

TEST_CASE("well-behavedness on linear games reads W") {
  const auto est = check_well_behaved(linear2(0.3), Eigen::Vector2d(1, 1), 4);
  CHECK(est.c2_lower(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(est.c1_upper(0) == doctest::Approx(0.3).epsilon(1e-6));
}
