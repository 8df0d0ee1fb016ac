#pragma once

#include <Eigen/Core>

#include "gphs/hermite.hpp"

namespace gphs {

/// Gauss-Hermite rule rescaled to the standard Gaussian: E[f] ~ sum w_i f(x_i),
/// exact for polynomials of degree <= 2n-1, weights sum to 1.
/// Nodes/weights come from the symmetric tridiagonal Jacobi matrix of the
/// probabilists' Hermite recurrence (off-diagonal sqrt(j)).
struct GaussHermite {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  explicit GaussHermite(int n);
};

/// Gauss-Legendre rule on [-1, 1]: integral f ~ sum w_i f(x_i), exact for
/// polynomials of degree <= 2n-1, weights sum to 2.
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  explicit GaussLegendre(int n);
};

/// E[f(x)] over x ~ N(0, I_d) by the tensor-product rule with n nodes per axis.
/// f receives a pointer to d coordinates.
template <class F>
double gauss_hermite_expect(int d, int n, F&& f) {
  GaussHermite rule(n);
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double acc = 0.0;
  for (;;) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      x[a] = rule.nodes[idx[a]];
      w *= rule.weights[idx[a]];
    }
    acc += w * f(x.data());
    int a = 0;
    while (a < d && ++idx[a] == n) idx[a++] = 0;
    if (a == d) break;
  }
  return acc;
}

/// Hermite coefficients of x -> P(Q x) for orthogonal Q, computed by a
/// Gauss-Hermite rule that is exact at the polynomial's degree. The rotated
/// polynomial has the same dimension and degree.
PolyCoeffs rotate_coeffs(const PolyCoeffs& p, const Eigen::MatrixXd& q);

}  // namespace gphs
