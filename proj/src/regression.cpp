#include "gphs/regression.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "gphs/parallel.hpp"

namespace gphs {

namespace {
constexpr double kLog2 = 0.6931471805599453094;
constexpr long long kChunk = 8192;
}

double logistic_loss(double u) {
  return u >= 0.0 ? std::log1p(std::exp(-u)) : -u + std::log1p(std::exp(u));
}

double logistic_psi(double u) {
  if (u >= 0.0) {
    double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

double RegressionProblem::ball_radius() const {
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  return std::sqrt(kLog2 / mu);
}

double RegressionProblem::lambda() const {
  if (trunc_radius > 0.0) return trunc_radius;
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  return 8.0 * ball_radius() * basis_size(d, k) / epsilon;
}

double truncated_pointwise_loss(const Eigen::VectorXd& c, const Eigen::VectorXd& x, int y,
                                const RegressionProblem& prob) {
  if (y != 1 && y != -1) throw InputError("label must be +1 or -1");
  HermiteFeatures feats(prob.d, prob.k);
  if (c.size() != feats.dim()) throw InputError("coefficient length mismatch");
  Eigen::VectorXd phi = feats.eval(x);
  if (phi.norm() > prob.lambda()) return kLog2;
  return logistic_loss(y * c.dot(phi));
}

double nuclear_norm(const Eigen::MatrixXd& a) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues().sum();
}

Eigen::MatrixXd nuclear_subgradient(const Eigen::MatrixXd& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() > 0 ? 1e-12 * sv[0] : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  if (rank == 0) return Eigen::MatrixXd::Zero(a.rows(), a.cols());
  return svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).transpose();
}

Eigen::VectorXd gradient_adjoint(const Eigen::MatrixXd& z, int d, int k) {
  const int mprime = k >= 1 ? basis_size(d, k - 1) : 1;
  if (z.rows() != d || z.cols() != mprime) throw InputError("adjoint shape mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis_size(d, k));
  if (k == 0) return out;
  HermiteFeatures feats(d, k);
  const auto& basis = feats.basis();
  MultiIndex bumped;
  for (int j = 0; j < mprime; ++j) {
    bumped = basis[j];
    for (int i = 0; i < d; ++i) {
      bumped[i] += 1;
      int pos = feats.position(bumped);
      bumped[i] -= 1;
      out[pos] += std::sqrt(static_cast<double>(basis[j][i] + 1)) * z(i, j);
    }
  }
  return out;
}

namespace {

// ||a||_* exactly, plus the cutoff polar factor UV^T (a nuclear subgradient);
// returns the singular-value mass dropped by the cutoff.
double polar_and_nuclear(const Eigen::MatrixXd& a, Eigen::MatrixXd& z, double& dropped) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() > 0 ? 1e-12 * sv[0] : 0.0;
  int rank = 0;
  double total = 0.0, kept = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) total += sv[i];
  while (rank < sv.size() && sv[rank] > cutoff) kept += sv[rank++];
  dropped = total - kept;
  if (rank == 0)
    z.setZero(a.rows(), a.cols());
  else
    z.noalias() = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).transpose();
  return total;
}

// cached featurization plus the index plumbing for A(c) and its adjoint
struct SolverCache {
  const RegressionProblem& prob;
  int n, m, mprime, threads;
  double lambda, radius;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi;
  Eigen::VectorXd ylab;
  Eigen::ArrayXd active;            // 1 when ||phi_i|| <= lambda
  double mean_active_norm = 0.0;    // (1/n) sum active_i ||phi_i||
  std::vector<int> bump_pos;        // beta_j + e_i positions, layout j*d+i
  std::vector<double> bump_w;       // sqrt(beta_j[i] + 1)

  SolverCache(const RegressionProblem& p, const LabeledDataset& data, int nthreads)
      : prob(p), threads(nthreads) {
    if (data.dim() != p.d) throw InputError("dataset dimension does not match problem");
    if (data.size() < 1) throw InputError("empty dataset");
    HermiteFeatures feats(p.d, p.k);
    n = static_cast<int>(data.size());
    m = feats.dim();
    mprime = p.k >= 1 ? basis_size(p.d, p.k - 1) : 1;
    lambda = p.lambda();
    radius = p.ball_radius();
    phi.resize(n, m);
    ylab.resize(n);
    active.resize(n);
    std::vector<double> norm_part(static_cast<std::size_t>((n + kChunk - 1) / kChunk), 0.0);
    parallel_chunks(n, kChunk, threads, [&](long long ci, long long b, long long e) {
      Eigen::VectorXd xi(p.d), row(m);
      for (long long i = b; i < e; ++i) {
        xi = data.x.row(i);
        feats.eval(xi.data(), row.data());
        phi.row(i) = row;
        double nrm = row.norm();
        active[i] = nrm <= lambda ? 1.0 : 0.0;
        norm_part[static_cast<std::size_t>(ci)] += active[i] * nrm;
        ylab[i] = data.y[i];
      }
    });
    for (double v : norm_part) mean_active_norm += v;
    mean_active_norm /= n;
    if (p.k >= 1) {
      const auto& basis = feats.basis();
      bump_pos.resize(static_cast<std::size_t>(mprime) * p.d);
      bump_w.resize(static_cast<std::size_t>(mprime) * p.d);
      MultiIndex bumped;
      for (int j = 0; j < mprime; ++j) {
        bumped = basis[j];
        for (int i = 0; i < p.d; ++i) {
          bumped[i] += 1;
          bump_pos[static_cast<std::size_t>(j) * p.d + i] = feats.position(bumped);
          bumped[i] -= 1;
          bump_w[static_cast<std::size_t>(j) * p.d + i] =
              std::sqrt(static_cast<double>(basis[j][i] + 1));
        }
      }
    }
  }

  void build_a(const Eigen::VectorXd& c, Eigen::MatrixXd& a) const {
    a.setZero(prob.d, mprime);
    if (prob.k == 0) return;
    for (int j = 0; j < mprime; ++j)
      for (int i = 0; i < prob.d; ++i)
        a(i, j) = bump_w[static_cast<std::size_t>(j) * prob.d + i] *
                  c[bump_pos[static_cast<std::size_t>(j) * prob.d + i]];
  }

  void adjoint(const Eigen::MatrixXd& z, Eigen::VectorXd& out) const {
    out.setZero(m);
    if (prob.k == 0) return;
    for (int j = 0; j < mprime; ++j)
      for (int i = 0; i < prob.d; ++i)
        out[bump_pos[static_cast<std::size_t>(j) * prob.d + i]] +=
            bump_w[static_cast<std::size_t>(j) * prob.d + i] * z(i, j);
  }

  // mean truncated loss + mu ||c||^2 and its gradient
  double smooth_value_grad(const Eigen::VectorXd& c, Eigen::VectorXd& grad, Eigen::VectorXd& u,
                           Eigen::VectorXd& s) const {
    const long long chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> val_part(static_cast<std::size_t>(chunks), 0.0);
    Eigen::MatrixXd grad_part(m, chunks);
    parallel_chunks(n, kChunk, threads, [&](long long ci, long long b, long long e) {
      auto rows = phi.middleRows(b, e - b);
      u.segment(b, e - b).noalias() = rows * c;
      double acc = 0.0;
      for (long long i = b; i < e; ++i) {
        if (active[i] != 0.0) {
          double z = ylab[i] * u[i];
          acc += logistic_loss(z);
          s[i] = -logistic_psi(z) * ylab[i] / n;
        } else {
          acc += kLog2;
          s[i] = 0.0;
        }
      }
      val_part[static_cast<std::size_t>(ci)] = acc;
      grad_part.col(ci).noalias() = rows.transpose() * s.segment(b, e - b);
    });
    double value = 0.0;
    for (double v : val_part) value += v;
    value = value / n + prob.mu * c.squaredNorm();
    grad = 2.0 * prob.mu * c;
    for (long long ci = 0; ci < chunks; ++ci) grad += grad_part.col(ci);
    return value;
  }

  double smooth_value(const Eigen::VectorXd& c, Eigen::VectorXd& u) const {
    const long long chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> val_part(static_cast<std::size_t>(chunks), 0.0);
    parallel_chunks(n, kChunk, threads, [&](long long ci, long long b, long long e) {
      u.segment(b, e - b).noalias() = phi.middleRows(b, e - b) * c;
      double acc = 0.0;
      for (long long i = b; i < e; ++i)
        acc += active[i] != 0.0 ? logistic_loss(ylab[i] * u[i]) : kLog2;
      val_part[static_cast<std::size_t>(ci)] = acc;
    });
    double value = 0.0;
    for (double v : val_part) value += v;
    return value / n + prob.mu * c.squaredNorm();
  }

  double full_value(const Eigen::VectorXd& c, Eigen::VectorXd& u, Eigen::MatrixXd& a) const {
    double v = smooth_value(c, u);
    if (prob.nu > 0.0 && prob.k >= 1) {
      build_a(c, a);
      v += prob.nu * nuclear_norm(a);
    }
    return v;
  }
};

// Dual-residual optimality bound at c, valid for any ||Z||_op <= 1:
//   gap <= nu (||A(c)||_* - <Z, A(c)>) + ||gs + nu adj(Z)||^2 / (4 mu).
// The ridge term makes the smooth part 2mu-strongly convex, hence the 4 mu.
// Z is refined by projected gradient over the operator-norm ball.
double residual_bound(const SolverCache& cache, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& grad_smooth) {
  const double mu = cache.prob.mu, nu = cache.prob.nu;
  if (nu == 0.0 || cache.prob.k == 0) return grad_smooth.squaredNorm() / (4.0 * mu);
  Eigen::MatrixXd a(cache.prob.d, cache.mprime);
  cache.build_a(c, a);
  const double anuc = nuclear_norm(a);
  Eigen::VectorXd adj(cache.m), resid(cache.m);
  auto value_at = [&](const Eigen::MatrixXd& z) {
    cache.adjoint(z, adj);
    resid = grad_smooth + nu * adj;
    return nu * (anuc - (z.array() * a.array()).sum()) + resid.squaredNorm() / (4.0 * mu);
  };
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd z = svd.matrixU() * svd.matrixV().transpose();  // polar factor
  double best = value_at(z);
  // gradient of the bound in Z is nu^2 k / (2 mu)-Lipschitz via ||adj|| <= sqrt(k)
  const double step = 2.0 * cache.prob.mu / (nu * nu * std::max(1, cache.prob.k));
  Eigen::MatrixXd zg, fwd(cache.prob.d, cache.mprime);
  for (int it = 0; it < 120; ++it) {
    cache.adjoint(z, adj);
    resid = grad_smooth + nu * adj;
    cache.build_a(resid, fwd);
    zg = -nu * a + (nu / (2.0 * mu)) * fwd;
    z -= step * zg;
    Eigen::BDCSVD<Eigen::MatrixXd> proj(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = proj.singularValues().cwiseMin(1.0);
    z.noalias() = proj.matrixU() * sv.asDiagonal() * proj.matrixV().transpose();
    best = std::min(best, value_at(z));
  }
  return best;
}

}  // namespace

double empirical_objective(const Eigen::VectorXd& c, const RegressionProblem& prob,
                           const LabeledDataset& data) {
  SolverCache cache(prob, data, 1);
  if (c.size() != cache.m) throw InputError("coefficient length mismatch");
  Eigen::VectorXd u(cache.n);
  Eigen::MatrixXd a;
  return cache.full_value(c, u, a);
}

SolveResult solve(const RegressionProblem& prob, const LabeledDataset& data, int threads) {
  if (!(prob.nu >= 0.0)) throw InputError("nu must be >= 0");
  if (!(prob.opt_tolerance > 0.0)) throw InputError("opt_tolerance must be positive");
  if (prob.max_iterations < 1) throw InputError("iteration budget must be >= 1");
  SolverCache cache(prob, data, threads);
  const double mu = prob.mu, nu = prob.nu, R = cache.radius, tol = prob.opt_tolerance;
  const bool spectral = nu > 0.0 && prob.k >= 1;

  // Lipschitz bound on the ball: psi in (0,1) gives the data term, the ridge
  // contributes 2 mu R, and ||adj(UV^T)||_2 <= sqrt(k min(d, m')) covers the
  // nuclear subgradient.
  const double g_bound =
      cache.mean_active_norm + 2.0 * mu * R +
      (spectral
           ? nu * std::sqrt(static_cast<double>(prob.k) * std::min(prob.d, cache.mprime))
           : 0.0);
  // smallest T with 2 G^2/(mu (T+1)) <= tol, clamped to the budget
  const double t_exact = 2.0 * g_bound * g_bound / (mu * tol);
  const long long t_target =
      t_exact >= static_cast<double>(prob.max_iterations)
          ? prob.max_iterations
          : std::max<long long>(1, static_cast<long long>(std::ceil(t_exact)) - 1);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(cache.m), cbar = c;
  Eigen::VectorXd grad(cache.m), g(cache.m), adj(cache.m);
  Eigen::VectorXd u(cache.n), s(cache.n);
  Eigen::MatrixXd a(prob.d, cache.mprime), zmat;

  SolveResult res;
  res.lipschitz_bound = g_bound;
  double inc_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd inc_point = c;
  double best_resid = std::numeric_limits<double>::infinity();

  long long next_check = 1;
  long long t = 0;
  while (t < t_target) {
    ++t;
    double value = cache.smooth_value_grad(c, grad, u, s);
    double dropped = 0.0;
    if (spectral) {
      cache.build_a(c, a);
      value += nu * polar_and_nuclear(a, zmat, dropped);
      cache.adjoint(zmat, adj);
      g = grad + nu * adj;
    } else {
      g = grad;
    }
    if (value < inc_value) {
      inc_value = value;
      inc_point = c;
    }
    best_resid = std::min(best_resid, nu * dropped + g.squaredNorm() / (4.0 * mu));
    cbar += (2.0 / (t + 1)) * (c - cbar);  // weights 2t/(T(T+1)) over pre-step iterates
    c -= (2.0 / (mu * (t + 1))) * g;
    double nrm = c.norm();
    if (nrm > R) c *= R / nrm;
    if (t == next_check || t == t_target) {
      next_check *= 2;
      double fbar = cache.full_value(cbar, u, a);
      if (fbar < inc_value) {
        inc_value = fbar;
        inc_point = cbar;
      }
      res.trace.push_back(inc_value);
      if (best_resid <= 0.9 * tol) break;
    }
  }
  res.iterations = t;
  res.schedule_gap = 2.0 * g_bound * g_bound / (mu * (t + 1));

  // monotone descent polish from the incumbent; Barzilai-Borwein steps halved
  // until the objective decreases
  if (prob.polish_iterations > 0) {
    c = inc_point;
    Eigen::VectorXd c_prev, g_prev, trial(cache.m);
    double step = 1.0;
    for (long long p = 0; p < prob.polish_iterations; ++p) {
      double fc = cache.smooth_value_grad(c, grad, u, s);
      double dropped = 0.0;
      if (spectral) {
        cache.build_a(c, a);
        fc += nu * polar_and_nuclear(a, zmat, dropped);
        cache.adjoint(zmat, adj);
        g = grad + nu * adj;
      } else {
        g = grad;
      }
      if (fc < inc_value) {
        inc_value = fc;
        inc_point = c;
      }
      best_resid = std::min(best_resid, nu * dropped + g.squaredNorm() / (4.0 * mu));
      if ((p & (p - 1)) == 0) res.trace.push_back(inc_value);
      res.polish_steps = p + 1;
      if (best_resid <= 0.25 * tol) break;
      if (c_prev.size() > 0) {
        Eigen::VectorXd sv = c - c_prev, yv = g - g_prev;
        double denom = sv.dot(yv);
        step = denom > 1e-300 ? std::clamp(sv.squaredNorm() / denom, 1e-10, 1e6) : 1.0;
      }
      c_prev = c;
      g_prev = g;
      bool moved = false;
      for (int half = 0; half < 40; ++half) {
        trial = c - step * g;
        double nrm = trial.norm();
        if (nrm > R) trial *= R / nrm;
        double ft = cache.full_value(trial, u, a);
        if (ft < fc - 1e-15) {
          c = trial;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
  }

  Eigen::VectorXd inc_grad(cache.m);
  cache.smooth_value_grad(inc_point, inc_grad, u, s);
  res.residual_gap = std::min(best_resid, residual_bound(cache, inc_point, inc_grad));
  res.certified_gap = std::min(res.schedule_gap, res.residual_gap);
  res.certified = res.certified_gap <= tol;
  res.objective = inc_value;
  res.trace.push_back(inc_value);
  res.coeffs.d = prob.d;
  res.coeffs.k = prob.k;
  res.coeffs.c = inc_point;
  if (!res.certified)
    throw CertificationError("optimality gap " + std::to_string(res.certified_gap) +
                                 " not certified to tolerance " + std::to_string(tol) +
                                 " within budget",
                             res);
  return res;
}

}  // namespace gphs
