#include "gphs/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "gphs/errors.hpp"

namespace gphs {

Eigen::MatrixXd influence_matrix(const PolyCoeffs& p) {
  Eigen::MatrixXd a = gradient_coeff_matrix(p);
  return a * a.transpose();
}

namespace {

Eigen::VectorXd checked_eigenvalues(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es) {
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10)
      throw std::runtime_error("matrix is not positive semidefinite (eigenvalue " +
                               std::to_string(ev[i]) + ")");
    if (ev[i] < 0.0) ev[i] = 0.0;
  }
  return ev;
}

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("matrix must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw InputError("matrix must be symmetric");
}

}  // namespace

double trace_sqrt(const Eigen::MatrixXd& m) {
  check_symmetric(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = checked_eigenvalues(es);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::sqrt(ev[i]);
  return s;
}

Subspace top_subspace(const Eigen::MatrixXd& m, double eta) {
  check_symmetric(m);
  if (!(eta > 0.0)) throw InputError("eta must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = checked_eigenvalues(es);
  const Eigen::Index d = ev.size();
  int r = 0;
  while (r < d && ev[d - 1 - r] >= eta) ++r;
  Subspace sub;
  sub.basis.resize(d, r);
  sub.eigenvalues.resize(r);
  for (int i = 0; i < r; ++i) {
    sub.basis.col(i) = es.eigenvectors().col(d - 1 - i);
    sub.eigenvalues[i] = ev[d - 1 - i];
  }
  return sub;
}

}  // namespace gphs
