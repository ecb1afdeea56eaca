#ifndef FEDGAME_COVERAGE_HPP
#define FEDGAME_COVERAGE_HPP

#include "fedgame/types.hpp"

#include <cmath>
#include <limits>

namespace fedgame {

/// Random-coverage utilities over a finite instance space.
///
/// Row i of Q is agent i's distribution over the n instance points. A point
/// x is misclassified with probability 1/2 unless some sample landed on it,
/// so u_i(m) = 1 - 1/2 sum_x q_ix prod_j (1 - q_jx)^{m_j} for integral sample
/// counts m. Real contributions are randomized-rounded per agent.
struct CoverageModel {
  Eigen::MatrixXd Q;

  Eigen::Index agents() const { return Q.rows(); }
  Eigen::Index points() const { return Q.cols(); }
};

CoverageModel make_coverage_model(Eigen::MatrixXd Q);

/// E[(1 - q)^m] for m = floor(theta) + Bernoulli(theta - floor(theta)).
template <typename Scalar>
Scalar rounding_factor(Scalar q, Scalar theta) {
  using std::floor;
  using std::pow;
  const Scalar whole = floor(theta);
  const Scalar frac = theta - whole;
  return pow(Scalar(1) - q, whole) * (Scalar(1) - frac * q);
}

Eigen::VectorXd eval_coverage(const CoverageModel& model, const Allocation& theta);

/// Utility of a single agent; cheaper than eval_coverage when only one is needed.
double coverage_utility(const CoverageModel& model, const Allocation& theta, Eigen::Index agent);

/// Minimal x >= 0 with u_agent(x, theta_{-agent}) >= mu. The entry
/// theta(agent) is ignored. Exact: u is affine in x between integers.
/// Throws ValidationError when mu cannot be reached (or only above `upper`).
double best_response_coverage(const CoverageModel& model, double mu, Eigen::Index agent,
                              const Allocation& theta,
                              double upper = std::numeric_limits<double>::infinity());

}  // namespace fedgame

#endif  // FEDGAME_COVERAGE_HPP
