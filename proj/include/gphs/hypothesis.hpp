#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace gphs {

/// Sign with ties sent to +1; the convention everywhere labels are produced.
inline int sign_pm(double u) { return u >= 0.0 ? 1 : -1; }

/// sign(<w,x> + t). A zero normal encodes the constant classifier sign(t),
/// so t = +1 / t = -1 are the two constant hypotheses.
struct Halfspace {
  Eigen::VectorXd w;
  double t = 0.0;

  int eval(const Eigen::VectorXd& x) const { return sign_pm(w.dot(x) + t); }
  bool is_constant() const { return w.size() == 0 || w.isZero(0.0); }
  static Halfspace constant(int d, int sign) {
    Halfspace h;
    h.w = Eigen::VectorXd::Zero(d);
    h.t = sign >= 0 ? 1.0 : -1.0;
    return h;
  }
};

/// Boolean function of K halfspaces. Cell index bit j is set when part j
/// fires +1; table has 2^K entries in cell-index order, values +1/-1.
struct BooleanHypothesis {
  std::vector<Halfspace> parts;
  std::vector<std::int8_t> table;

  int cell(const Eigen::VectorXd& x) const {
    int b = 0;
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (parts[j].eval(x) > 0) b |= 1 << j;
    return b;
  }
  int eval(const Eigen::VectorXd& x) const { return table[cell(x)]; }

  /// Conjunction table: +1 exactly on the all-ones cell.
  static std::vector<std::int8_t> intersection_table(int k) {
    std::vector<std::int8_t> t(std::size_t(1) << k, -1);
    t.back() = 1;
    return t;
  }
};

using Hypothesis = std::variant<Halfspace, BooleanHypothesis>;

inline int hypothesis_eval(const Hypothesis& h, const Eigen::VectorXd& x) {
  return std::holds_alternative<Halfspace>(h) ? std::get<Halfspace>(h).eval(x)
                                              : std::get<BooleanHypothesis>(h).eval(x);
}

/// Ambient dimension of the normals (0 for an empty Boolean hypothesis).
inline int hypothesis_dim(const Hypothesis& h) {
  if (std::holds_alternative<Halfspace>(h))
    return static_cast<int>(std::get<Halfspace>(h).w.size());
  const auto& b = std::get<BooleanHypothesis>(h);
  return b.parts.empty() ? 0 : static_cast<int>(b.parts.front().w.size());
}

/// Text form: one "w_1 ... w_d t" line per halfspace; boolean hypotheses are
/// prefixed with "boolean K" and followed by the truth table as a +/- string
/// in cell-index order.
std::string hypothesis_to_text(const Hypothesis& h);

}  // namespace gphs
