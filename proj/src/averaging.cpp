#include "gphs/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gphs/errors.hpp"
#include "gphs/gauss.hpp"
#include "gphs/parallel.hpp"
#include "gphs/quadrature.hpp"
#include "gphs/rng.hpp"

namespace gphs {

double averaged_halfspace_eval(const Halfspace& f, const Subspace& v, const Eigen::VectorXd& x) {
  if (f.w.size() != x.size() || v.ambient_dim() != x.size())
    throw InputError("dimension mismatch in averaged evaluation");
  Eigen::VectorXd in_span = Eigen::VectorXd::Zero(x.size());
  if (v.dim() > 0) in_span = v.basis * (v.basis.transpose() * f.w);
  const double s = (f.w - in_span).norm();
  if (s <= 1e-12 * std::max(1.0, f.w.norm())) return sign_pm(f.w.dot(x) + f.t);
  return 2.0 * normal_cdf((in_span.dot(x) + f.t) / s) - 1.0;
}

namespace {

// f(x_V + z) depends on z only through W = span of the out-of-span normal
// components; part j fires iff offset_j + <u_j, g> >= 0 for g ~ N(0, I_q)
struct AveragedBoolean {
  Eigen::MatrixXd u;  // q x K coordinates of the out-of-span components
  Eigen::VectorXd offset_base;  // thresholds
  Eigen::MatrixXd in_coords;    // r x K in-span coordinates of the normals
  const BooleanHypothesis* f = nullptr;
  const Subspace* v = nullptr;
  int q = 0;

  AveragedBoolean(const BooleanHypothesis& hyp, const Subspace& vs) : f(&hyp), v(&vs) {
    const int kparts = static_cast<int>(hyp.parts.size());
    const int d = vs.ambient_dim();
    const int r = vs.dim();
    if (kparts < 1 || hyp.table.size() != (std::size_t(1) << kparts))
      throw InputError("malformed Boolean hypothesis");
    in_coords.resize(r, kparts);
    offset_base.resize(kparts);
    Eigen::MatrixXd perp(d, kparts);
    for (int j = 0; j < kparts; ++j) {
      const Halfspace& h = hyp.parts[static_cast<std::size_t>(j)];
      if (h.w.size() != d) throw InputError("dimension mismatch in averaged evaluation");
      Eigen::VectorXd bw = r > 0 ? (vs.basis.transpose() * h.w).eval() : Eigen::VectorXd(0);
      in_coords.col(j) = bw;
      perp.col(j) = h.w - (r > 0 ? (vs.basis * bw).eval() : Eigen::VectorXd::Zero(d).eval());
      offset_base[j] = h.t;
    }
    // orthonormal basis of span(perp) by modified Gram-Schmidt
    Eigen::MatrixXd w(d, kparts);
    for (int j = 0; j < kparts; ++j) {
      Eigen::VectorXd col = perp.col(j);
      for (int pass = 0; pass < 2; ++pass)
        for (int a = 0; a < q; ++a) col -= w.col(a).dot(col) * w.col(a);
      double nrm = col.norm();
      if (nrm > 1e-10) w.col(q++) = col / nrm;
    }
    u = w.leftCols(q).transpose() * perp;
  }

  int cell_from_offsets(const Eigen::VectorXd& off) const {
    int c = 0;
    for (int j = 0; j < off.size(); ++j)
      if (off[j] >= 0.0) c |= 1 << j;
    return c;
  }

  // MC draws use normals at indices base + s*q + a, so distinct points get
  // disjoint, order-independent blocks of the stream
  double eval(const Eigen::VectorXd& x, int n_mc, const RandomStream& stream,
              std::uint64_t base) const {
    Eigen::VectorXd off = offset_base;
    if (v->dim() > 0) off += in_coords.transpose() * (v->basis.transpose() * x);
    if (q == 0) return f->table[static_cast<std::size_t>(cell_from_offsets(off))];
    Eigen::VectorXd g(q);
    long long acc = 0;
    for (int s = 0; s < n_mc; ++s) {
      for (int a = 0; a < q; ++a)
        g[a] = stream.normal(base + static_cast<std::uint64_t>(s) * q + a);
      int c = 0;
      for (int j = 0; j < off.size(); ++j)
        if (off[j] + u.col(j).dot(g) >= 0.0) c |= 1 << j;
      acc += f->table[static_cast<std::size_t>(c)];
    }
    return static_cast<double>(acc) / n_mc;
  }
};

}  // namespace

double averaged_boolean_eval(const BooleanHypothesis& f, const Subspace& v,
                             const Eigen::VectorXd& x, int n_mc, std::uint64_t seed) {
  if (n_mc < 1) throw InputError("n_mc must be >= 1");
  if (v.ambient_dim() != x.size()) throw InputError("dimension mismatch in averaged evaluation");
  AveragedBoolean avg(f, v);
  RandomStream stream(seed, static_cast<std::uint64_t>(RngDomain::averaging_mc));
  return avg.eval(x, n_mc, stream, 0);
}

CorrelationResidual correlation_residual(const Hypothesis& f, const Subspace& v,
                                         const LabeledDataset& data, int n_mc, std::uint64_t seed,
                                         int threads) {
  const long long n = data.size();
  if (n < 1) throw InputError("empty dataset");
  const bool boolean = std::holds_alternative<BooleanHypothesis>(f);
  if (boolean && n_mc < 1) throw InputError("n_mc must be >= 1");
  std::optional<AveragedBoolean> avg;
  if (boolean) avg.emplace(std::get<BooleanHypothesis>(f), v);
  RandomStream stream(seed, static_cast<std::uint64_t>(RngDomain::averaging_mc));
  const long long chunk = 1024;
  std::vector<double> sums(static_cast<std::size_t>((n + chunk - 1) / chunk), 0.0);
  std::vector<double> sqs(sums.size(), 0.0);
  parallel_chunks(n, chunk, threads, [&](long long ci, long long b, long long e) {
    double s = 0.0, s2 = 0.0;
    Eigen::VectorXd xi;
    for (long long i = b; i < e; ++i) {
      xi = data.x.row(i);
      double fv = boolean ? avg->eval(xi, n_mc, stream,
                                      static_cast<std::uint64_t>(i) *
                                          static_cast<std::uint64_t>(n_mc) *
                                          static_cast<std::uint64_t>(std::max(avg->q, 1)))
                          : averaged_halfspace_eval(std::get<Halfspace>(f), v, xi);
      double ri = (hypothesis_eval(f, xi) - fv) * data.y[static_cast<std::size_t>(i)];
      s += ri;
      s2 += ri * ri;
    }
    sums[static_cast<std::size_t>(ci)] = s;
    sqs[static_cast<std::size_t>(ci)] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    s += sums[i];
    s2 += sqs[i];
  }
  CorrelationResidual out;
  out.value = s / static_cast<double>(n);
  if (n > 1) {
    double var = std::max(0.0, (s2 - s * s / static_cast<double>(n)) / static_cast<double>(n - 1));
    out.std_err = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

OuParams select_ou_params(double gsa, double tau, double c_ou) {
  if (!(gsa >= 1.0)) throw InputError("gsa must be >= 1");
  if (!(tau > 0.0 && tau <= 0.5)) throw InputError("tau must be in (0, 1/2]");
  if (!(c_ou > 0.0 && c_ou <= 1.0)) throw InputError("c_ou must be in (0, 1]");
  OuParams p;
  p.gsa = gsa;
  p.tau = tau;
  p.c_ou = c_ou;
  p.rho = 1.0 - c_ou * tau * tau / (gsa * gsa);
  p.trunc_degree = static_cast<int>(std::ceil(std::log(2.0 / tau) / std::log(1.0 / p.rho)));
  return p;
}

PolyCoeffs ou_smooth_truncate(const PolyCoeffs& f, const OuParams& params) {
  if (!(params.rho >= 0.0 && params.rho <= 1.0)) throw InputError("rho must be in [0, 1]");
  const int m = params.trunc_degree;
  if (m < 0) throw InputError("truncation degree must be >= 0");
  if (f.k < m) throw InputError("expansion reaches degree " + std::to_string(f.k) +
                                " but the truncation needs degree " + std::to_string(m));
  auto idx = enumerate_multi_indices(f.d, f.k);
  if (f.c.size() != static_cast<Eigen::Index>(idx.size()))
    throw InputError("coefficient length mismatch");
  std::vector<double> rho_pow(static_cast<std::size_t>(m) + 1, 1.0);
  for (int j = 1; j <= m; ++j)
    rho_pow[static_cast<std::size_t>(j)] = rho_pow[static_cast<std::size_t>(j) - 1] * params.rho;
  PolyCoeffs out = PolyCoeffs::zero(f.d, m);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    int deg = multi_degree(idx[a]);
    if (deg > m) break;  // graded order: all later indices have higher degree
    out.c[static_cast<Eigen::Index>(a)] = rho_pow[static_cast<std::size_t>(deg)] * f.c[static_cast<Eigen::Index>(a)];
  }
  return out;
}

namespace {

constexpr double kPanelLimit = 13.0;  // Gaussian mass beyond is ~1e-38
constexpr double kPanelWidth = 0.05;
constexpr int kPanelNodes = 16;

// visit(x, w) over a Gauss-Legendre panelization of [-limit, limit] with a
// panel boundary pinned at the kink
template <class F>
void panel_quadrature(double kink, F&& visit) {
  static const GaussLegendre rule(kPanelNodes);
  auto run = [&](double lo, double hi) {
    if (hi <= lo) return;
    int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanelWidth)));
    double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      double a = lo + p * w, mid = a + 0.5 * w, half = 0.5 * w;
      for (int i = 0; i < kPanelNodes; ++i)
        visit(mid + half * rule.nodes[i], half * rule.weights[i]);
    }
  };
  double split = std::clamp(kink, -kPanelLimit, kPanelLimit);
  run(-kPanelLimit, split);
  run(split, kPanelLimit);
}

// sqrt of the Gaussian density; evaluating H_j against it keeps every
// intermediate bounded at high degree
double half_density(double x) {
  return std::exp(-0.25 * x * x) / std::pow(2.0 * M_PI, 0.25);
}

}  // namespace

PolyCoeffs univariate_sign_coeffs(double b, int degree) {
  if (degree < 0) throw InputError("degree must be >= 0");
  PolyCoeffs out = PolyCoeffs::zero(1, degree);
  Eigen::VectorXd buf(degree + 1);
  panel_quadrature(-b, [&](double x, double w) {
    double g = half_density(x);
    hermite_eval_all_scaled(degree, x, g, buf.data());
    out.c += (w * g * sign_pm(x + b)) * buf;
  });
  return out;
}

double ou_sign_l1_error(double b, const PolyCoeffs& s) {
  if (s.d != 1) throw InputError("univariate polynomial expected");
  Eigen::VectorXd buf(s.k + 1);
  double acc = 0.0;
  panel_quadrature(-b, [&](double x, double w) {
    double g = half_density(x);
    hermite_eval_all_scaled(s.k, x, g, buf.data());
    acc += w * g * std::abs(sign_pm(x + b) * g - s.c.dot(buf));
  });
  return acc;
}

PoincareCheck poincare_check(const PolyCoeffs& p, const Eigen::MatrixXd& directions) {
  const int d = p.d;
  const int r = static_cast<int>(directions.cols());
  if (directions.rows() != d || r < 1 || r > d) throw InputError("direction shape mismatch");
  if ((directions.transpose() * directions - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() >
      1e-10)
    throw InputError("directions are not orthonormal");
  PoincareCheck out;
  Eigen::MatrixXd a = gradient_coeff_matrix(p);
  Eigen::MatrixXd m = a * a.transpose();
  out.rhs = (directions.transpose() * m * directions).trace();
  // rotate so the direction span becomes the first r coordinates; the
  // conditional mean then zeroes every coefficient touching them
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(directions);
  Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  PolyCoeffs rotated = rotate_coeffs(p, full);
  auto idx = enumerate_multi_indices(d, p.k);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    bool touches = false;
    for (int a2 = 0; a2 < r; ++a2) touches = touches || idx[i][static_cast<std::size_t>(a2)] > 0;
    if (touches) out.lhs += rotated.c[static_cast<Eigen::Index>(i)] * rotated.c[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace gphs
