#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "gphs/dataset.hpp"
#include "gphs/errors.hpp"
#include "gphs/hermite.hpp"

namespace gphs {

/// log(1 + e^{-u}), evaluated without overflow on either tail.
double logistic_loss(double u);

/// psi(u) = 1/(1 + e^u) = -d/du logistic_loss(u).
double logistic_psi(double u);

/// Convex program: minimize over ||c||_2 <= R = sqrt(log2 / mu)
///   (1/N) sum_i loss_i(c) + mu ||c||^2 + nu ||A(c)||_*
/// where loss_i is the logistic loss of y_i <c, Phi(x_i)> when ||Phi(x_i)||_2
/// is at most the truncation radius and log 2 otherwise, and A(c) is the
/// gradient coefficient matrix of the degree-k polynomial with coefficients c.
struct RegressionProblem {
  int d = 1;
  int k = 1;
  double mu = 1.0 / 128.0;
  double nu = 0.0;
  double epsilon = 0.1;        // feeds the default truncation radius
  double opt_tolerance = 1e-4;
  double trunc_radius = 0.0;   // <= 0 selects the default 8*R*m/epsilon
  long long max_iterations = 200000;  // subgradient budget
  long long polish_iterations = 2000; // descent polish budget (0 disables)

  double ball_radius() const;  // sqrt(log 2 / mu)
  double lambda() const;       // truncation radius actually in force
};

/// Loss of one labeled point under the truncation rule above.
double truncated_pointwise_loss(const Eigen::VectorXd& c, const Eigen::VectorXd& x, int y,
                                const RegressionProblem& prob);

/// Full objective at c over the dataset.
double empirical_objective(const Eigen::VectorXd& c, const RegressionProblem& prob,
                           const LabeledDataset& data);

/// Sum of singular values.
double nuclear_norm(const Eigen::MatrixXd& a);

/// U V^T from a thin SVD, directions with sigma < 1e-12 * sigma_max dropped;
/// a subgradient of the nuclear norm at a.
Eigen::MatrixXd nuclear_subgradient(const Eigen::MatrixXd& a);

/// Adjoint of c -> gradient_coeff_matrix(c) for dimension-d degree-k
/// polynomials: <Z, A(c)>_F = <gradient_adjoint(Z, d, k), c> for all c.
Eigen::VectorXd gradient_adjoint(const Eigen::MatrixXd& z, int d, int k);

struct SolveResult {
  PolyCoeffs coeffs;
  double objective = 0.0;
  double certified_gap = 0.0;    // min of the two bounds below
  double schedule_gap = 0.0;     // 2 G^2 / (mu (T+1)) for the averaged iterate
  double residual_gap = 0.0;     // dual-residual bound at the incumbent
  double lipschitz_bound = 0.0;  // G
  long long iterations = 0;
  long long polish_steps = 0;
  bool certified = false;
  std::vector<double> trace;     // incumbent objective at geometric checkpoints
};

/// Raised when neither bound certifies opt_tolerance within the budgets.
struct CertificationError : ResourceError {
  SolveResult best;
  CertificationError(const std::string& what, SolveResult r)
      : ResourceError(what), best(std::move(r)) {}
};

/// Projected subgradient with steps 2/(mu (t+1)) and 2/(t+1)-weighted
/// averaging, followed by a monotone descent polish; returns the best
/// incumbent with a certified optimality gap. Deterministic for fixed inputs.
SolveResult solve(const RegressionProblem& prob, const LabeledDataset& data, int threads = 1);

}  // namespace gphs
