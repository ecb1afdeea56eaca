#ifndef FEDGAME_LINEAR_HPP
#define FEDGAME_LINEAR_HPP

#include "fedgame/types.hpp"

namespace fedgame {

/// Random-discovery utilities u(theta) = W theta.
///
/// W_ij is the rate at which agent j's effort raises agent i's utility.
/// Construct through make_linear_model(), which validates symmetry and a
/// positive diagonal, and records whether the matrix is in canonical
/// (unit diagonal) form and whether it is positive semidefinite.
struct LinearModel {
  Eigen::MatrixXd W;
  bool canonical = false;
  bool psd = false;
  double min_eigenvalue = 0.0;

  Eigen::Index agents() const { return W.rows(); }
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = -1e-8;

LinearModel make_linear_model(Eigen::MatrixXd W);

/// W = Q Q^T for discovery distributions given as the rows of Q.
LinearModel from_discovery(const Eigen::MatrixXd& Q);

/// Strict row dominance: sum_{j != i} W_ij < W_ii for every i.
bool is_diagonally_dominant(const LinearModel& model);

template <typename Derived>
auto eval_linear(const LinearModel& model, const Eigen::MatrixBase<Derived>& theta) {
  if (theta.size() != model.agents()) {
    throw ValidationError("eval_linear: allocation has " + std::to_string(theta.size()) +
                          " entries, model has " + std::to_string(model.agents()) + " agents");
  }
  return (model.W * theta.derived()).eval();
}

}  // namespace fedgame

#endif  // FEDGAME_LINEAR_HPP
