#include "gphs/hermite.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gphs {

namespace {

void check_dims(int d, int k) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (k < 0) throw std::invalid_argument("degree must be >= 0");
}

// packed exponent key for the position lookup; two bytes per coordinate
std::string pack_key(const MultiIndex& alpha) {
  std::string key(2 * alpha.size(), '\0');
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    key[2 * i] = static_cast<char>(alpha[i] & 0xFF);
    key[2 * i + 1] = static_cast<char>((alpha[i] >> 8) & 0xFF);
  }
  return key;
}

void emit_tails(MultiIndex& work, int coord, int remaining, std::vector<MultiIndex>& out) {
  if (coord == static_cast<int>(work.size()) - 1) {
    work[coord] = remaining;
    out.push_back(work);
    return;
  }
  for (int a = 0; a <= remaining; ++a) {
    work[coord] = a;
    emit_tails(work, coord + 1, remaining - a, out);
  }
}

}  // namespace

int multi_degree(const MultiIndex& alpha) {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

int basis_size(int d, int k) {
  check_dims(d, k);
  // C(d+k, k) by exact interleaved multiply/divide
  unsigned long long acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned long long>(d + i) / static_cast<unsigned long long>(i);
    if (acc > (1ull << 31)) throw std::invalid_argument("basis size exceeds int range");
  }
  return static_cast<int>(acc);
}

std::vector<MultiIndex> enumerate_multi_indices(int d, int k) {
  check_dims(d, k);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(basis_size(d, k)));
  MultiIndex work(d, 0);
  for (int n = 0; n <= k; ++n) emit_tails(work, 0, n, out);
  return out;
}

double hermite_eval(int j, double t) {
  if (j < 0) throw std::invalid_argument("hermite degree must be >= 0");
  std::vector<double> buf(static_cast<std::size_t>(j) + 1);
  hermite_eval_all(j, t, buf.data());
  return buf[static_cast<std::size_t>(j)];
}

void hermite_eval_all(int k, double t, double* out) { hermite_eval_all_scaled(k, t, 1.0, out); }

void hermite_eval_all_scaled(int k, double t, double scale, double* out) {
  out[0] = scale;
  if (k == 0) return;
  out[1] = t * scale;
  for (int j = 1; j < k; ++j)
    out[j + 1] = (t * out[j] - std::sqrt(static_cast<double>(j)) * out[j - 1]) /
                 std::sqrt(static_cast<double>(j + 1));
}

PolyCoeffs PolyCoeffs::zero(int d, int k) {
  PolyCoeffs p;
  p.d = d;
  p.k = k;
  p.c = Eigen::VectorXd::Zero(basis_size(d, k));
  return p;
}

std::string poly_to_text(const PolyCoeffs& p) {
  if (p.c.size() != basis_size(p.d, p.k)) throw std::invalid_argument("coefficient length mismatch");
  std::string out;
  char line[64];
  std::snprintf(line, sizeof(line), "%d %d %lld\n", p.d, p.k, static_cast<long long>(p.c.size()));
  out += line;
  for (Eigen::Index i = 0; i < p.c.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g\n", p.c[i]);
    out += line;
  }
  return out;
}

PolyCoeffs poly_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("poly text: empty input");
  PolyCoeffs p;
  long long m = -1;
  {
    std::istringstream head(line);
    if (!(head >> p.d >> p.k >> m)) throw std::invalid_argument("poly text: bad header '" + line + "'");
    std::string rest;
    if (head >> rest) throw std::invalid_argument("poly text: trailing tokens in header");
  }
  check_dims(p.d, p.k);
  if (m != basis_size(p.d, p.k))
    throw std::invalid_argument("poly text: header count does not match C(d+k, k)");
  p.c.resize(m);
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("poly text: expected " + std::to_string(m) + " coefficients, got " +
                                  std::to_string(i));
    std::istringstream ls(line);
    if (!(ls >> p.c[i]))
      throw std::invalid_argument("poly text line " + std::to_string(i + 2) + ": bad coefficient '" +
                                  line + "'");
    std::string rest;
    if (ls >> rest)
      throw std::invalid_argument("poly text line " + std::to_string(i + 2) + ": trailing tokens");
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument("poly text: trailing content after coefficients");
  return p;
}

HermiteFeatures::HermiteFeatures(int d, int k) : d_(d), k_(k) {
  check_dims(d, k);
  basis_ = enumerate_multi_indices(d, k);
  pos_.reserve(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) pos_[pack_key(basis_[i])] = static_cast<int>(i);
}

int HermiteFeatures::position(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != d_) return -1;
  auto it = pos_.find(pack_key(alpha));
  return it == pos_.end() ? -1 : it->second;
}

void HermiteFeatures::eval(const double* x, double* out) const {
  // per-axis values H_0..H_k, then products over the nonzero exponents
  std::vector<double> table(static_cast<std::size_t>(d_) * (k_ + 1));
  for (int a = 0; a < d_; ++a) hermite_eval_all(k_, x[a], table.data() + static_cast<std::size_t>(a) * (k_ + 1));
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    double v = 1.0;
    const MultiIndex& alpha = basis_[i];
    for (int a = 0; a < d_; ++a)
      if (alpha[a] != 0) v *= table[static_cast<std::size_t>(a) * (k_ + 1) + alpha[a]];
    out[i] = v;
  }
}

Eigen::VectorXd HermiteFeatures::eval(const Eigen::VectorXd& x) const {
  if (x.size() != d_) throw std::invalid_argument("point dimension mismatch");
  Eigen::VectorXd out(dim());
  eval(x.data(), out.data());
  return out;
}

Eigen::MatrixXd HermiteFeatures::eval_rows(const Eigen::MatrixXd& points) const {
  if (points.cols() != d_) throw std::invalid_argument("point dimension mismatch");
  Eigen::MatrixXd out(points.rows(), dim());
  Eigen::VectorXd xi(d_), row(dim());
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    xi = points.row(r);
    eval(xi.data(), row.data());
    out.row(r) = row;
  }
  return out;
}

double poly_eval(const PolyCoeffs& p, const Eigen::VectorXd& x) {
  HermiteFeatures feats(p.d, p.k);
  if (p.c.size() != feats.dim()) throw std::invalid_argument("coefficient length mismatch");
  return p.c.dot(feats.eval(x));
}

Eigen::MatrixXd gradient_coeff_matrix(const PolyCoeffs& p) {
  if (p.c.size() != basis_size(p.d, p.k)) throw std::invalid_argument("coefficient length mismatch");
  const int mprime = p.k >= 1 ? basis_size(p.d, p.k - 1) : 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p.d, mprime);
  if (p.k == 0) return a;
  HermiteFeatures feats(p.d, p.k);
  // degree <= k-1 indices are exactly the first m' entries of the enumeration
  const auto& basis = feats.basis();
  MultiIndex bumped;
  for (int j = 0; j < mprime; ++j) {
    bumped = basis[j];
    for (int i = 0; i < p.d; ++i) {
      bumped[i] += 1;
      int pos = feats.position(bumped);
      bumped[i] -= 1;
      a(i, j) = std::sqrt(static_cast<double>(basis[j][i] + 1)) * p.c[pos];
    }
  }
  return a;
}

double gradient_energy(const PolyCoeffs& p) {
  if (p.c.size() != basis_size(p.d, p.k)) throw std::invalid_argument("coefficient length mismatch");
  auto basis = enumerate_multi_indices(p.d, p.k);
  double s = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    s += static_cast<double>(multi_degree(basis[i])) * p.c[static_cast<Eigen::Index>(i)] *
         p.c[static_cast<Eigen::Index>(i)];
  return s;
}

}  // namespace gphs
