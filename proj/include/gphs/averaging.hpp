#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "gphs/dataset.hpp"
#include "gphs/hermite.hpp"
#include "gphs/hypothesis.hpp"
#include "gphs/spectral.hpp"

namespace gphs {

/// Conditional expectation of sign(<w,x>+t) given the component of x in
/// span(v): 2*Phi((<w_V,x>+t)/s) - 1 with s = ||w perpendicular to v||, or
/// sign(<w,x>+t) when s vanishes.
double averaged_halfspace_eval(const Halfspace& f, const Subspace& v, const Eigen::VectorXd& x);

/// Monte-Carlo conditional expectation of a Boolean hypothesis given the
/// component of x in span(v), deterministic in (n_mc, seed). Exact (no
/// sampling) when every normal lies in span(v).
double averaged_boolean_eval(const BooleanHypothesis& f, const Subspace& v,
                             const Eigen::VectorXd& x, int n_mc, std::uint64_t seed);

struct CorrelationResidual {
  double value = 0.0;    // mean of (f(x) - f_V(x)) * y over the sample
  double std_err = 0.0;  // sample standard error of that mean
};

/// Empirical correlation of the labels with the part of f outside span(v).
CorrelationResidual correlation_residual(const Hypothesis& f, const Subspace& v,
                                         const LabeledDataset& data, int n_mc, std::uint64_t seed,
                                         int threads = 1);

/// Ornstein-Uhlenbeck smoothing parameters.
struct OuParams {
  double rho = 0.0;      // per-level Hermite damping factor
  int trunc_degree = 0;  // truncation degree m
  double gsa = 1.0;      // Gaussian surface area bound driving rho
  double tau = 0.0;      // target L1 accuracy
  double c_ou = 0.25;    // damping constant in 1 - rho = c_ou tau^2 / gsa^2
};

/// rho = 1 - c_ou tau^2 / gsa^2 and m = ceil(log(2/tau)/log(1/rho)). The L1
/// approximation guarantee targets tau < 1/10; inputs up to tau = 1/2 are
/// accepted for calibration sweeps.
OuParams select_ou_params(double gsa, double tau, double c_ou = 0.25);

/// Scales coefficient alpha by rho^|alpha| and truncates at degree m. The
/// input expansion must reach degree m; the result has degree exactly m.
PolyCoeffs ou_smooth_truncate(const PolyCoeffs& f, const OuParams& params);

/// Hermite coefficients of sign(x+b) up to the given degree, by panelized
/// Gauss-Legendre quadrature against the Gaussian weight, split at the sign
/// change.
PolyCoeffs univariate_sign_coeffs(double b, int degree);

/// E|sign(x+b) - s(x)| under the standard Gaussian for univariate s, by the
/// same panelized quadrature.
double ou_sign_l1_error(double b, const PolyCoeffs& s);

struct PoincareCheck {
  double lhs = 0.0;  // E[(P - E[P | component orthogonal to the directions])^2]
  double rhs = 0.0;  // sum_i xi_i' M(P) xi_i
};

/// Subspace Gaussian Poincare inequality lhs <= rhs, both sides computed
/// exactly: rhs from the gradient coefficient matrix, lhs by rotating the
/// Hermite expansion so the direction span becomes the leading coordinates.
/// Directions are columns and must be orthonormal.
PoincareCheck poincare_check(const PolyCoeffs& p, const Eigen::MatrixXd& directions);

}  // namespace gphs
