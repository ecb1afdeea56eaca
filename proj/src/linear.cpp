#include "fedgame/linear.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace fedgame {

LinearModel make_linear_model(Eigen::MatrixXd W) {
  if (W.rows() == 0 || W.rows() != W.cols()) {
    throw ValidationError("linear model: W must be a non-empty square matrix");
  }
  if (!W.allFinite()) throw ValidationError("linear model: W has non-finite entries");
  if ((W.array() < 0.0).any()) throw ValidationError("linear model: W has negative entries");
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < W.cols(); ++j) {
      if (std::abs(W(i, j) - W(j, i)) > kSymmetryTol) {
        std::ostringstream os;
        os << "linear model: W is not symmetric at (" << i << "," << j << ")";
        throw ValidationError(os.str());
      }
    }
    if (!(W(i, i) > 0.0)) {
      throw ValidationError("linear model: W(" + std::to_string(i) + "," + std::to_string(i) +
                            ") must be positive");
    }
  }
  LinearModel model;
  model.canonical = ((W.diagonal().array() - 1.0).abs() <= kSymmetryTol).all();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W, Eigen::EigenvaluesOnly);
  model.min_eigenvalue = eig.eigenvalues().minCoeff();
  model.psd = model.min_eigenvalue >= kPsdTol;
  model.W = std::move(W);
  return model;
}

LinearModel from_discovery(const Eigen::MatrixXd& Q) {
  if (Q.rows() == 0 || Q.cols() == 0) throw ValidationError("from_discovery: empty Q");
  if ((Q.array() < 0.0).any()) throw ValidationError("from_discovery: Q has negative entries");
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    if (std::abs(Q.row(i).sum() - 1.0) > 1e-9) {
      throw ValidationError("from_discovery: row " + std::to_string(i) + " does not sum to 1");
    }
  }
  Eigen::MatrixXd W = Q * Q.transpose();
  // Exact symmetry; the product can differ in the last bit.
  W = (0.5 * (W + W.transpose())).eval();
  return make_linear_model(std::move(W));
}

bool is_diagonally_dominant(const LinearModel& model) {
  const auto& W = model.W;
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    const double off = W.row(i).sum() - W(i, i);
    if (!(off < W(i, i))) return false;
  }
  return true;
}

}  // namespace fedgame
