#include "gphs/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gphs {

GaussHermite::GaussHermite(int n) {
  if (n < 1) throw std::invalid_argument("node count must be >= 1");
  // Golub-Welsch on the Jacobi matrix of the probabilists' recurrence
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    double b = std::sqrt(static_cast<double>(j));
    jac(j, j - 1) = b;
    jac(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success) throw std::runtime_error("quadrature eigensolve failed");
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = es.eigenvectors()(0, i);
    weights[i] = v * v;  // total mass 1 for the standard Gaussian
  }
}

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("node count must be >= 1");
  // Golub-Welsch on the Jacobi matrix of the Legendre recurrence
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    double b = static_cast<double>(j) / std::sqrt(4.0 * j * j - 1.0);
    jac(j, j - 1) = b;
    jac(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success) throw std::runtime_error("quadrature eigensolve failed");
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v * v;  // total mass 2 on [-1, 1]
  }
}

PolyCoeffs rotate_coeffs(const PolyCoeffs& p, const Eigen::MatrixXd& q) {
  if (q.rows() != p.d || q.cols() != p.d) throw std::invalid_argument("rotation shape mismatch");
  if ((q.transpose() * q - Eigen::MatrixXd::Identity(p.d, p.d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("rotation is not orthogonal");
  HermiteFeatures feats(p.d, p.k);
  if (p.c.size() != feats.dim()) throw std::invalid_argument("coefficient length mismatch");
  // c'_beta = E[P(Q x) H_beta(x)]; integrand degree 2k, k+1 nodes per axis exact
  const int n = p.k + 3;
  GaussHermite rule(n);
  PolyCoeffs out = PolyCoeffs::zero(p.d, p.k);
  Eigen::VectorXd xt(p.d), phi(feats.dim());
  std::vector<int> idx(p.d, 0);
  for (;;) {
    double w = 1.0;
    for (int a = 0; a < p.d; ++a) {
      xt[a] = rule.nodes[idx[a]];
      w *= rule.weights[idx[a]];
    }
    double val = p.c.dot(feats.eval(q * xt));
    feats.eval(xt.data(), phi.data());
    out.c += w * val * phi;
    int a = 0;
    while (a < p.d && ++idx[a] == n) idx[a++] = 0;
    if (a == p.d) break;
  }
  return out;
}

}  // namespace gphs
