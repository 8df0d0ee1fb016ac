#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gphs/averaging.hpp"
#include "gphs/errors.hpp"
#include "gphs/gauss.hpp"
#include "gphs/rng.hpp"

using namespace gphs;

namespace {

Subspace axis_subspace(int d, int r) {
  Subspace v;
  v.basis = Eigen::MatrixXd::Identity(d, d).leftCols(r);
  v.eigenvalues = Eigen::VectorXd::Ones(r);
  return v;
}

}  // namespace

TEST_CASE("averaged halfspace evaluation closed form") {
  Subspace v = axis_subspace(3, 1);
  Halfspace h;
  h.w = Eigen::Vector3d(0.6, 0.0, 0.8);  // in-subspace part 0.6, perpendicular norm 0.8
  h.t = 0.2;
  Eigen::Vector3d x(1.0, -2.0, 5.0);  // only x1 matters after conditioning
  double expect = 2.0 * normal_cdf((0.6 * 1.0 + 0.2) / 0.8) - 1.0;
  CHECK(averaged_halfspace_eval(h, v, x) == doctest::Approx(expect).epsilon(1e-12));

  // normal fully inside the subspace: conditional expectation is the sign
  Halfspace inside;
  inside.w = Eigen::Vector3d(1.0, 0.0, 0.0);
  inside.t = -0.5;
  CHECK(averaged_halfspace_eval(inside, v, x) == 1.0);
  Eigen::Vector3d xneg(0.2, 0.0, 0.0);
  CHECK(averaged_halfspace_eval(inside, v, xneg) == -1.0);

  // zero-dimensional subspace: plain Gaussian expectation 2 Phi(t / ||w||) - 1
  Subspace v0 = axis_subspace(3, 0);
  CHECK(averaged_halfspace_eval(h, v0, x) ==
        doctest::Approx(2.0 * normal_cdf(0.2) - 1.0).epsilon(1e-12));

  Halfspace wrong;
  wrong.w = Eigen::Vector2d(1.0, 0.0);
  CHECK_THROWS_AS(averaged_halfspace_eval(wrong, v, x), InputError);
}

TEST_CASE("averaged halfspace matches Monte Carlo") {
  Subspace v = axis_subspace(4, 2);
  Halfspace h;
  h.w = Eigen::Vector4d(0.3, -0.5, 0.7, 0.4).normalized();
  h.t = -0.35;
  RandomStream rs = stream(7100, RngDomain::misc);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::Vector4d x;
    for (int j = 0; j < 4; ++j) x[j] = rs.normal(rep * 4 + j);
    double closed = averaged_halfspace_eval(h, v, x);

    // resample the orthogonal component: x' = P_V x + (I - P_V) g
    const int n = 100000;
    double acc = 0.0;
    for (int s = 0; s < n; ++s) {
      Eigen::Vector4d g;
      for (int j = 0; j < 4; ++j)
        g[j] = rs.normal(1000000 + (static_cast<std::uint64_t>(rep) * n + s) * 4 + j);
      Eigen::Vector4d xp = x;
      xp.tail(2) = g.tail(2);
      acc += h.eval(xp);
    }
    double mc = acc / n;
    double se = std::sqrt((1.0 - closed * closed) / n) + 1e-9;
    CHECK(std::abs(closed - mc) < 4.0 * se + 0.005);
  }
}

TEST_CASE("averaged boolean evaluation is exact when normals lie in the subspace") {
  Subspace v = axis_subspace(3, 2);
  BooleanHypothesis f;
  f.parts.resize(2);
  f.parts[0].w = Eigen::Vector3d(1.0, 0.0, 0.0);
  f.parts[0].t = 0.1;
  f.parts[1].w = Eigen::Vector3d(0.0, 1.0, 0.0);
  f.parts[1].t = -0.4;
  f.table = {1, -1, -1, 1};
  Eigen::Vector3d x(0.5, 0.7, -3.0);
  // deterministic given x1, x2; n_mc and seed must not matter
  double a = averaged_boolean_eval(f, v, x, 1, 1);
  double b = averaged_boolean_eval(f, v, x, 777, 999);
  CHECK(a == static_cast<double>(f.eval(x)));
  CHECK(a == b);
}

TEST_CASE("averaged boolean K = 1 agrees with the halfspace closed form") {
  Subspace v = axis_subspace(3, 1);
  Halfspace h;
  h.w = Eigen::Vector3d(0.6, 0.0, 0.8);
  h.t = 0.2;
  BooleanHypothesis f;
  f.parts = {h};
  f.table = {-1, 1};  // identity table: f = sign part
  Eigen::Vector3d x(0.9, 0.0, 0.0);

  double closed = averaged_halfspace_eval(h, v, x);
  double mc = averaged_boolean_eval(f, v, x, 400000, 4242);
  CHECK(std::abs(mc - closed) < 4.0 / std::sqrt(400000.0) + 0.004);

  Eigen::VectorXd short_x = Eigen::Vector2d(1.0, 2.0);
  CHECK_THROWS_AS(averaged_boolean_eval(f, v, short_x, 10, 1), InputError);
  CHECK_THROWS_AS(averaged_boolean_eval(f, v, x, 0, 1), InputError);
  BooleanHypothesis bad = f;
  bad.table = {1};
  CHECK_THROWS_AS(averaged_boolean_eval(bad, v, x, 10, 1), InputError);
}

TEST_CASE("XOR averaged onto the trivial subspace is near zero") {
  // sign(x1)*sign(x2) has mean zero; conditioning on a subspace orthogonal to
  // both normals keeps it centered.
  Subspace v = axis_subspace(3, 1);
  v.basis = Eigen::MatrixXd::Zero(3, 1);
  v.basis(2, 0) = 1.0;
  BooleanHypothesis f;
  f.parts.resize(2);
  f.parts[0].w = Eigen::Vector3d(1.0, 0.0, 0.0);
  f.parts[1].w = Eigen::Vector3d(0.0, 1.0, 0.0);
  f.table = {1, -1, -1, 1};
  Eigen::Vector3d x(4.0, -4.0, 0.3);
  double val = averaged_boolean_eval(f, v, x, 200000, 31);
  CHECK(std::abs(val) < 0.012);
}

TEST_CASE("correlation residual vanishes when the hypothesis is measurable on V") {
  Subspace v = axis_subspace(2, 2);  // full space: f_V = f exactly
  Halfspace h;
  h.w = Eigen::Vector2d(1.0, 1.0).normalized();
  h.t = 0.1;
  LabeledDataset ds;
  ds.x.resize(300, 2);
  ds.y.resize(300);
  RandomStream rs = stream(7300, RngDomain::misc);
  for (int i = 0; i < 300; ++i) {
    ds.x(i, 0) = rs.normal(2 * i);
    ds.x(i, 1) = rs.normal(2 * i + 1);
    ds.y[i] = rs.uniform(5000 + i) < 0.5 ? 1 : -1;
  }
  CorrelationResidual r = correlation_residual(Hypothesis(h), v, ds, 10, 1);
  CHECK(std::abs(r.value) < 1e-12);
  CHECK(r.std_err >= 0.0);
}

TEST_CASE("correlation residual is small for labels independent of the missed part") {
  // f depends on x2 only, labels depend on x1 only: E[(f - f_V) y] = 0.
  Subspace v = axis_subspace(2, 1);
  Halfspace h;
  h.w = Eigen::Vector2d(0.0, 1.0);
  h.t = 0.0;
  LabeledDataset ds;
  const int n = 4000;
  ds.x.resize(n, 2);
  ds.y.resize(n);
  RandomStream rs = stream(7400, RngDomain::misc);
  for (int i = 0; i < n; ++i) {
    ds.x(i, 0) = rs.normal(2 * i);
    ds.x(i, 1) = rs.normal(2 * i + 1);
    ds.y[i] = ds.x(i, 0) >= 0.0 ? 1 : -1;
  }
  CorrelationResidual r = correlation_residual(Hypothesis(h), v, ds, 10, 1);
  CHECK(std::abs(r.value) <= 4.0 * r.std_err + 0.01);
}

TEST_CASE("select_ou_params closed form and scaling") {
  OuParams p = select_ou_params(1.0, 0.1);
  CHECK(p.rho == doctest::Approx(1.0 - 0.25 * 0.01).epsilon(1e-12));
  CHECK(p.trunc_degree ==
        static_cast<int>(std::ceil(std::log(20.0) / std::log(1.0 / p.rho))));
  CHECK(p.gsa == 1.0);
  CHECK(p.tau == 0.1);

  // halving tau multiplies the degree by about 4 (up to the log(2/tau) factor)
  OuParams ph = select_ou_params(1.0, 0.05);
  double ratio = static_cast<double>(ph.trunc_degree) / p.trunc_degree;
  CHECK(ratio >= 3.9);
  CHECK(ratio <= 4.0 * (1.0 + std::log(2.0) / std::log(20.0)) + 0.1);

  // doubling the surface area bound quadruples 1 - rho's denominator
  OuParams pg = select_ou_params(2.0, 0.1);
  CHECK(1.0 - pg.rho == doctest::Approx((1.0 - p.rho) / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(select_ou_params(0.5, 0.1), InputError);
  CHECK_THROWS_AS(select_ou_params(1.0, 0.0), InputError);
  CHECK_THROWS_AS(select_ou_params(1.0, 0.6), InputError);
  CHECK_THROWS_AS(select_ou_params(1.0, 0.1, 0.0), InputError);
  CHECK_THROWS_AS(select_ou_params(1.0, 0.1, 1.5), InputError);
}

TEST_CASE("ou_smooth_truncate damps and truncates") {
  PolyCoeffs f = PolyCoeffs::zero(2, 4);
  HermiteFeatures feats(2, 4);
  f.c[feats.position({0, 0})] = 1.0;
  f.c[feats.position({1, 0})] = 0.5;
  f.c[feats.position({2, 2})] = -0.3;
  f.c[feats.position({0, 4})] = 0.2;

  OuParams params;
  params.rho = 0.9;
  params.trunc_degree = 3;
  PolyCoeffs s = ou_smooth_truncate(f, params);
  CHECK(s.k == 3);
  HermiteFeatures sf(2, 3);
  CHECK(s.c[sf.position({0, 0})] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.c[sf.position({1, 0})] == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(s.c[sf.position({1, 1})] == 0.0);
  CHECK(s.c.size() == basis_size(2, 3));

  // rho = 1 keeps every kept coefficient; rho = 0 keeps only the mean
  params.rho = 1.0;
  params.trunc_degree = 4;
  PolyCoeffs id = ou_smooth_truncate(f, params);
  CHECK((id.c - f.c).cwiseAbs().maxCoeff() == 0.0);
  params.rho = 0.0;
  params.trunc_degree = 2;
  PolyCoeffs flat = ou_smooth_truncate(f, params);
  CHECK(flat.c[0] == 1.0);
  CHECK(flat.c.tail(flat.c.size() - 1).cwiseAbs().maxCoeff() == 0.0);

  // smoothing contracts the L2 norm
  params.rho = 0.8;
  params.trunc_degree = 4;
  PolyCoeffs sm = ou_smooth_truncate(f, params);
  CHECK(sm.c.norm() <= f.c.norm());

  params.trunc_degree = 6;
  CHECK_THROWS_AS(ou_smooth_truncate(f, params), InputError);
  params.trunc_degree = 2;
  params.rho = 1.5;
  CHECK_THROWS_AS(ou_smooth_truncate(f, params), InputError);
}

TEST_CASE("univariate sign coefficients closed form") {
  // c_0 = 2 Phi(b) - 1, c_j = (2 / sqrt(j)) phi(b) H_{j-1}(-b)
  for (double b : {0.0, 0.3, -0.8}) {
    PolyCoeffs c = univariate_sign_coeffs(b, 12);
    REQUIRE(c.d == 1);
    REQUIRE(c.k == 12);
    CHECK(c.c[0] == doctest::Approx(2.0 * normal_cdf(b) - 1.0).epsilon(1e-10));
    for (int j = 1; j <= 12; ++j) {
      double expect = 2.0 / std::sqrt(static_cast<double>(j)) * normal_pdf(b) *
                      hermite_eval(j - 1, -b);
      CHECK(c.c[j] == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
    }
  }
  CHECK_THROWS_AS(univariate_sign_coeffs(0.0, -1), InputError);
}

TEST_CASE("ou_sign_l1_error known values") {
  // zero polynomial: E|sign(x+b)| = 1
  PolyCoeffs zero = PolyCoeffs::zero(1, 0);
  CHECK(ou_sign_l1_error(0.4, zero) == doctest::Approx(1.0).epsilon(1e-10));

  // constant 1 at b = 0: integrand is 0 on x > 0 and 2 on x < 0
  PolyCoeffs one = PolyCoeffs::zero(1, 0);
  one.c[0] = 1.0;
  CHECK(ou_sign_l1_error(0.0, one) == doctest::Approx(1.0).epsilon(1e-10));

  // the degree-40 expansion of sign(x + 0.25) is already decent in L1
  PolyCoeffs s = univariate_sign_coeffs(0.25, 40);
  CHECK(ou_sign_l1_error(0.25, s) < 0.3);

  PolyCoeffs multi = PolyCoeffs::zero(2, 1);
  CHECK_THROWS_AS(ou_sign_l1_error(0.0, multi), InputError);
}

TEST_CASE("poincare_check equality for linear polynomials") {
  // P = <a, x>: both sides equal the captured directional energy exactly.
  PolyCoeffs p = PolyCoeffs::zero(3, 1);
  HermiteFeatures feats(3, 1);
  Eigen::Vector3d a(0.7, -1.2, 0.4);
  p.c[feats.position({1, 0, 0})] = a[0];
  p.c[feats.position({0, 1, 0})] = a[1];
  p.c[feats.position({0, 0, 1})] = a[2];

  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(3, 2);
  PoincareCheck r = poincare_check(p, dirs);
  double expect = a[0] * a[0] + a[1] * a[1];
  CHECK(r.lhs == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("poincare_check is zero orthogonal to the dependence") {
  // P depends on x1 only; direction e2 sees none of it.
  PolyCoeffs p = PolyCoeffs::zero(2, 3);
  HermiteFeatures feats(2, 3);
  p.c[feats.position({1, 0})] = 1.0;
  p.c[feats.position({3, 0})] = -0.6;
  Eigen::MatrixXd e2 = Eigen::MatrixXd::Zero(2, 1);
  e2(1, 0) = 1.0;
  PoincareCheck r = poincare_check(p, e2);
  CHECK(std::abs(r.lhs) < 1e-12);
  CHECK(std::abs(r.rhs) < 1e-12);
}

TEST_CASE("poincare_check inequality holds on random instances") {
  RandomStream rs = stream(7900, RngDomain::misc);
  for (int t = 0; t < 40; ++t) {
    int d = 2 + t % 3, k = 1 + t % 4, r = 1 + t % d;
    PolyCoeffs p = PolyCoeffs::zero(d, k);
    for (int i = 0; i < p.c.size(); ++i)
      p.c[i] = rs.normal(static_cast<std::uint64_t>(t) * 1000 + i);

    Eigen::MatrixXd g(d, r);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < r; ++j)
        g(i, j) = rs.normal(500000 + static_cast<std::uint64_t>(t) * 1000 + i * r + j);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd dirs = qr.householderQ() * Eigen::MatrixXd::Identity(d, r);

    PoincareCheck chk = poincare_check(p, dirs);
    CHECK(chk.lhs <= chk.rhs + 1e-10);
  }
}

TEST_CASE("poincare_check validation") {
  PolyCoeffs p = PolyCoeffs::zero(2, 2);
  p.c[0] = 1.0;
  CHECK_THROWS_AS(poincare_check(p, Eigen::MatrixXd::Ones(2, 2)), InputError);
  CHECK_THROWS_AS(poincare_check(p, Eigen::MatrixXd::Identity(3, 1)), InputError);
  CHECK_THROWS_AS(poincare_check(p, Eigen::MatrixXd::Identity(2, 0)), InputError);
}
