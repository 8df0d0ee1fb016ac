#pragma once

#include <Eigen/Core>
#include <string>
#include <unordered_map>
#include <vector>

namespace gphs {

/// Exponent vector of one Hermite basis element; length d, entries >= 0.
using MultiIndex = std::vector<int>;

/// Total degree |alpha|.
int multi_degree(const MultiIndex& alpha);

/// Number of multi-indices of dimension d and total degree <= k, C(d+k, k).
/// Throws std::invalid_argument when the count does not fit in an int.
int basis_size(int d, int k);

/// All multi-indices with |alpha| <= k, graded lexicographic: ascending total
/// degree, ties broken by ascending lexicographic comparison of the exponent
/// vectors. The order is part of the coefficient-vector layout and of the
/// text serialization.
std::vector<MultiIndex> enumerate_multi_indices(int d, int k);

/// Value of the normalized probabilists' Hermite polynomial H_j at t.
/// H_0 = 1, H_1 = t, H_2 = (t^2 - 1)/sqrt(2), E[H_i H_j] = delta_ij under N(0,1).
double hermite_eval(int j, double t);

/// H_0(t), ..., H_k(t) via the three-term recurrence
/// H_{j+1} = (t*H_j - sqrt(j)*H_{j-1})/sqrt(j+1); out has k+1 slots.
void hermite_eval_all(int k, double t, double* out);

/// Same recurrence started at `scale` instead of 1, so out[j] = scale*H_j(t).
/// Seeding with sqrt of a quadrature weight keeps high-degree evaluation at
/// extreme nodes inside double range.
void hermite_eval_all_scaled(int k, double t, double scale, double* out);

/// Polynomial in the multivariate Hermite basis.
struct PolyCoeffs {
  int d = 0;          // ambient dimension
  int k = 0;          // max total degree
  Eigen::VectorXd c;  // length basis_size(d, k), graded-lex order

  static PolyCoeffs zero(int d, int k);
};

/// Round-trip text form: header "d k m" then m coefficients, one per line.
std::string poly_to_text(const PolyCoeffs& p);

/// Parses poly_to_text output; throws std::invalid_argument with the offending
/// line on malformed input. Bit-exact for finite coefficients.
PolyCoeffs poly_from_text(const std::string& text);

/// Evaluator for the degree-<=k Hermite feature map in d variables.
/// Holds the basis enumeration and a position lookup.
class HermiteFeatures {
 public:
  HermiteFeatures(int d, int k);

  int input_dim() const { return d_; }
  int degree() const { return k_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<MultiIndex>& basis() const { return basis_; }

  /// Position of alpha in the enumeration, -1 if |alpha| > k or wrong length.
  int position(const MultiIndex& alpha) const;

  /// Phi(x): out[i] = H_{alpha_i}(x), out has dim() slots.
  void eval(const double* x, double* out) const;
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;

  /// One row per point: (n x d) points -> (n x m) features.
  Eigen::MatrixXd eval_rows(const Eigen::MatrixXd& points) const;

 private:
  int d_, k_;
  std::vector<MultiIndex> basis_;
  std::unordered_map<std::string, int> pos_;  // packed exponents -> position
};

/// P(x) = <c, Phi(x)>.
double poly_eval(const PolyCoeffs& p, const Eigen::VectorXd& x);

/// A(P): d x m' matrix of gradient coefficients, m' = basis_size(d, k-1).
/// Row i, column beta holds sqrt(beta_i + 1) * c_{beta + e_i}, so that
/// d_i P = sum_beta A_{i,beta} H_beta. Degree 0 gives a d x 1 zero matrix.
Eigen::MatrixXd gradient_coeff_matrix(const PolyCoeffs& p);

/// E||grad P||^2 = sum_alpha |alpha| c_alpha^2.
double gradient_energy(const PolyCoeffs& p);

}  // namespace gphs
