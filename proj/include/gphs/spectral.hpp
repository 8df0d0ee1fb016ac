#pragma once

#include <Eigen/Core>

#include "gphs/hermite.hpp"

namespace gphs {

/// Influence matrix M(P) = E[grad P grad P^T] = A(P) A(P)^T, assembled exactly
/// from the gradient coefficient matrix.
Eigen::MatrixXd influence_matrix(const PolyCoeffs& p);

/// tr(M^{1/2}) for symmetric positive semidefinite m. Eigenvalues in
/// [-1e-10, 0) are clipped to zero; anything lower is a numerical failure.
double trace_sqrt(const Eigen::MatrixXd& m);

/// Principal eigenspace selected by an eigenvalue threshold.
struct Subspace {
  Eigen::MatrixXd basis;        // d x r, orthonormal columns
  Eigen::VectorXd eigenvalues;  // the r retained eigenvalues, descending

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient_dim() const { return static_cast<int>(basis.rows()); }
};

/// Eigenvectors of m with eigenvalue >= eta, eigenvalues descending, ties at
/// the cutoff included. r = 0 (a d x 0 basis) is a valid outcome.
Subspace top_subspace(const Eigen::MatrixXd& m, double eta);

}  // namespace gphs
