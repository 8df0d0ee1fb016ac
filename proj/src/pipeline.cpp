#include "gphs/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gphs/averaging.hpp"
#include "gphs/cover.hpp"
#include "gphs/hermite.hpp"
#include "gphs/regression.hpp"
#include "gphs/spectral.hpp"

namespace gphs {

using nlohmann::json;

namespace {

const char* task_name(LearnTask t) {
  switch (t) {
    case LearnTask::boolean_k:
      return "boolean";
    case LearnTask::intersection:
      return "intersection";
    default:
      return "halfspace";
  }
}

LearnTask task_from_name(const std::string& s) {
  if (s == "halfspace") return LearnTask::halfspace;
  if (s == "boolean") return LearnTask::boolean_k;
  if (s == "intersection") return LearnTask::intersection;
  throw InputError("unknown task: " + s);
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
  double total() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

/// Formula values actually used by a run.
struct Resolved {
  int k = 1;
  bool degree_capped = false;
  double eta = 0.0;
  double nu = 0.0;
  double cover_acc = 0.0;
  double tol = 0.0;
  long long n1 = 0;
  bool n1_calibrated = false;
  long long m = 0;  // feature count at degree k
};

Resolved resolve(const LearnerConfig& c) {
  if (c.dim < 1) throw InputError("dim must be >= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 0.5)) throw InputError("epsilon must be in (0, 1/2)");
  if (!(c.delta > 0.0 && c.delta < 0.5)) throw InputError("delta must be in (0, 1/2)");
  if (!(c.mu > 0.0)) throw InputError("mu must be > 0");
  if (!(c.c0 > 0.0 && c.c_nu > 0.0 && c.cover_c > 0.0))
    throw InputError("c0, cnu and cover_c must be > 0");
  if (c.threads < 1) throw InputError("threads must be >= 1");
  if (c.max_degree < 1) throw InputError("max_degree must be >= 1");
  const bool tuple_task = c.task != LearnTask::halfspace;
  if (tuple_task) {
    if (c.K < 1) throw InputError("K must be >= 1");
    if (c.K > c.max_k) throw InputError("K exceeds max_k");
  }
  if (c.n_test < 1) throw InputError("n_test must be >= 1");
  Resolved r;
  const double eps = c.epsilon;
  const int kk = tuple_task ? c.K : 1;
  if (c.degree_k >= 0) {
    r.k = c.degree_k;
  } else {
    double kf = tuple_task ? c.c0 * kk * kk * std::log(1.0 / eps) / (eps * eps)
                           : c.c0 / (eps * eps);
    long long want = static_cast<long long>(std::ceil(kf));
    r.degree_capped = want > c.max_degree;
    r.k = static_cast<int>(std::min<long long>(want, c.max_degree));
    r.k = std::max(r.k, 1);
  }
  if (c.eta >= 0.0) {
    if (!(c.eta > 0.0)) throw InputError("eta must be > 0");
    r.eta = c.eta;
  } else {
    r.eta = tuple_task ? eps * eps / (c.c0 * kk) : eps * eps / c.c0;
  }
  if (c.nu >= 0.0) {
    r.nu = c.nu;
  } else if (c.task == LearnTask::halfspace) {
    r.nu = c.c_nu * std::pow(eps, 1.5);
  } else if (c.task == LearnTask::boolean_k) {
    r.nu = c.c_nu * std::pow(eps, 1.5) / std::pow(static_cast<double>(kk), 1.5);
  } else {
    r.nu = kk == 1 ? c.c_nu * std::pow(eps, 1.5)
                   : c.c_nu * std::pow(eps, 1.5) / std::sqrt(kk * std::log(static_cast<double>(kk)));
  }
  if (c.cover_accuracy > 0.0) {
    r.cover_acc = c.cover_accuracy;
  } else {
    r.cover_acc = tuple_task ? c.cover_c * eps / kk : eps;
  }
  r.tol = c.opt_tolerance > 0.0 ? c.opt_tolerance : eps * eps * eps / 100.0;
  r.m = basis_size(c.dim, r.k);
  if (c.n1 >= 0) {
    if (c.n1 < 1) throw InputError("n1 must be >= 1");
    r.n1 = c.n1;
  } else {
    r.n1 = std::clamp<long long>(200 * r.m, 1000, 200000);
    r.n1_calibrated = true;
  }
  return r;
}

long long n2_formula(const LearnerConfig& c, long long cover_size) {
  double log_h = std::log(static_cast<double>(std::max<long long>(cover_size, 2)));
  double eps2 = c.epsilon * c.epsilon;
  double v = c.task == LearnTask::halfspace
                 ? 8.0 * (log_h + std::log(1.0 / c.delta)) / eps2
                 : 8.0 * (c.K * log_h + std::pow(2.0, c.K) + std::log(1.0 / c.delta)) / eps2;
  return static_cast<long long>(std::ceil(v));
}

LabeledDataset slice_rows(const LabeledDataset& ds, long long begin, long long count,
                          const char* which) {
  if (count < 1 || begin + count > ds.size())
    throw InputError(std::string("external dataset too small for the ") + which + " slice");
  LabeledDataset out;
  out.x = ds.x.middleRows(begin, count);
  out.y.assign(ds.y.begin() + begin, ds.y.begin() + begin + count);
  return out;
}

double dataset_error(const Hypothesis& h, const LabeledDataset& data) {
  long long wrong = 0;
  Eigen::VectorXd xi;
  for (long long i = 0; i < data.size(); ++i) {
    xi = data.x.row(i);
    if (hypothesis_eval(h, xi) != data.y[static_cast<std::size_t>(i)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

json solver_json(const SolveResult& s) {
  return json{{"objective", s.objective},
              {"certified_gap", s.certified_gap},
              {"schedule_gap", s.schedule_gap},
              {"residual_gap", s.residual_gap},
              {"lipschitz_bound", s.lipschitz_bound},
              {"iterations", s.iterations},
              {"polish_steps", s.polish_steps},
              {"certified", s.certified}};
}

json subspace_json(const Subspace& v, double ts) {
  std::vector<double> eig(v.eigenvalues.data(), v.eigenvalues.data() + v.eigenvalues.size());
  std::vector<double> basis(v.basis.data(), v.basis.data() + v.basis.size());
  return json{{"dim", v.dim()},
              {"eigenvalues", eig},
              {"trace_sqrt", ts},
              {"basis_column_major", basis}};
}

json cover_json(const Cover& cov) {
  return json{{"size", cov.items.size()},
              {"normals", cov.normal_count},
              {"grid", cov.grid_count},
              {"accuracy", cov.eps_cover},
              {"t_max", cov.t_max}};
}

std::string table_string(const std::vector<std::int8_t>& table) {
  std::string s;
  for (auto v : table) s += v > 0 ? '+' : '-';
  return s;
}

json hypothesis_json(const Hypothesis& h, const char* kind) {
  json out{{"kind", kind}, {"text", hypothesis_to_text(h)}};
  if (std::holds_alternative<BooleanHypothesis>(h))
    out["table"] = table_string(std::get<BooleanHypothesis>(h).table);
  return out;
}

json config_echo(const LearnerConfig& c, const Resolved& r) {
  return json{{"task", task_name(c.task)},
              {"dim", c.dim},
              {"K", c.task == LearnTask::halfspace ? 1 : c.K},
              {"epsilon", c.epsilon},
              {"delta", c.delta},
              {"c0", c.c0},
              {"cnu", c.c_nu},
              {"cover_c", c.cover_c},
              {"mu", c.mu},
              {"nu", r.nu},
              {"eta", r.eta},
              {"degree_k", r.k},
              {"degree_capped", r.degree_capped},
              {"max_degree", c.max_degree},
              {"features", r.m},
              {"cover_accuracy", r.cover_acc},
              {"opt_tolerance", r.tol},
              {"trunc_radius", c.trunc_radius},
              {"n1", r.n1},
              {"n1_calibrated", r.n1_calibrated},
              {"n2", nullptr},
              {"n_test", c.n_test},
              {"seed", c.seed},
              {"max_cover", c.max_cover},
              {"max_tuples", c.max_tuples},
              {"max_iterations", c.max_iterations},
              {"polish_iterations", c.polish_iterations},
              {"mc_residual", c.mc_residual},
              {"threads", c.threads}};
}

json empty_report(const LearnerConfig& c, const Resolved& r) {
  json rep;
  rep["config"] = config_echo(c, r);
  rep["solver"] = nullptr;
  rep["subspace"] = nullptr;
  rep["cover"] = nullptr;
  rep["hypothesis"] = nullptr;
  rep["errors"] = nullptr;
  rep["checks"] = nullptr;
  rep["timings"] = nullptr;
  return rep;
}

void check_source(const DataSource& source) {
  if ((source.planted != nullptr) == (source.external != nullptr))
    throw InputError("exactly one of planted model and external dataset required");
}

/// Train/validation/test come from disjoint seed domains when planted, and
/// from disjoint row ranges of the external dataset otherwise.
struct Sampler {
  const LearnerConfig* cfg;
  const DataSource* src;
  long long used = 0;

  LabeledDataset draw(long long n, RngDomain domain, const char* which) {
    if (src->planted) return sample_dataset(*src->planted, cfg->dim, n, cfg->seed, domain);
    if (src->external->dim() != cfg->dim) throw InputError("external dataset dimension mismatch");
    LabeledDataset out = slice_rows(*src->external, used, n, which);
    used += n;
    return out;
  }
  LabeledDataset draw_rest(long long want, RngDomain domain, const char* which) {
    if (src->planted) return sample_dataset(*src->planted, cfg->dim, want, cfg->seed, domain);
    return slice_rows(*src->external, used, src->external->size() - used, which);
  }
};

json finish_errors(const LearnerConfig& c, const DataSource& src, const json& train_err,
                   const json& valid_err, double test_err) {
  json errors{{"train", train_err},
              {"valid", valid_err},
              {"test", test_err},
              {"epsilon", c.epsilon},
              {"opt_ub", nullptr},
              {"guarantee_ok", nullptr}};
  if (src.planted) {
    double opt = planted_opt(*src.planted);
    errors["opt_ub"] = opt;
    errors["guarantee_ok"] = test_err <= opt + c.epsilon;
  }
  return errors;
}

}  // namespace

json run_learner(const LearnerConfig& config, const DataSource& source) {
  check_source(source);
  Resolved r = resolve(config);
  json rep = empty_report(config, r);
  json timings = json::object();
  Stopwatch total_sw, sw;
  auto fail = [&](const char* stage, const std::exception& e) {
    timings["total"] = total_sw.total();
    rep["timings"] = timings;
    rep["failed_stage"] = stage;
    return RunError(e.what(), rep);
  };

  Sampler sampler{&config, &source, 0};
  LabeledDataset train = sampler.draw(r.n1, RngDomain::train, "train");
  timings["sampling"] = sw.lap();

  SolveResult sr;
  try {
    RegressionProblem prob;
    prob.d = config.dim;
    prob.k = r.k;
    prob.mu = config.mu;
    prob.nu = r.nu;
    prob.epsilon = config.epsilon;
    prob.opt_tolerance = r.tol;
    prob.trunc_radius = config.trunc_radius;
    prob.max_iterations = config.max_iterations;
    prob.polish_iterations = config.polish_iterations;
    sr = solve(prob, train, config.threads);
  } catch (const CertificationError& e) {
    rep["solver"] = solver_json(e.best);
    timings["solve"] = sw.lap();
    throw fail("solve", e);
  }
  rep["solver"] = solver_json(sr);
  timings["solve"] = sw.lap();

  Eigen::MatrixXd m = influence_matrix(sr.coeffs);
  Subspace v = top_subspace(m, r.eta);
  double ts = trace_sqrt(m);
  rep["subspace"] = subspace_json(v, ts);
  double dim_bound = ts / std::sqrt(r.eta);
  json checks;
  checks["dim_bound"] =
      json{{"dim", v.dim()}, {"bound", dim_bound}, {"ok", v.dim() <= dim_bound + 1e-9}};
  checks["correlation_residual"] = nullptr;
  timings["spectral"] = sw.lap();

  Cover cover;
  try {
    cover = build_cover(v, r.cover_acc, config.max_cover, config.seed);
  } catch (const CoverBudgetError& e) {
    rep["checks"] = checks;
    timings["cover"] = sw.lap();
    throw fail("cover", e);
  }
  rep["cover"] = cover_json(cover);
  timings["cover"] = sw.lap();

  long long n2 = config.n2 >= 0 ? config.n2 : n2_formula(config, static_cast<long long>(cover.items.size()));
  if (n2 < 1) throw InputError("n2 must be >= 1");
  rep["config"]["n2"] = n2;
  LabeledDataset valid = sampler.draw(n2, RngDomain::valid, "validation");
  timings["sampling"] = timings["sampling"].get<double>() + sw.lap();

  Hypothesis hyp;
  double valid_err = 1.0;
  if (config.task == LearnTask::halfspace) {
    ErmResult er = erm_halfspace(cover, valid, config.threads);
    hyp = cover.items[static_cast<std::size_t>(er.index)];
    valid_err = er.error;
    rep["hypothesis"] = hypothesis_json(hyp, "halfspace");
    rep["hypothesis"]["index"] = er.index;
  } else {
    const char* kind = config.task == LearnTask::boolean_k ? "boolean" : "intersection";
    try {
      SearchResult search = config.task == LearnTask::boolean_k
                                ? search_boolean(cover, config.K, valid, config.max_tuples,
                                                 config.threads)
                                : search_intersection(cover, config.K, valid, config.max_tuples,
                                                      config.threads);
      hyp = search.hypothesis;
      valid_err = search.error;
      rep["hypothesis"] = hypothesis_json(hyp, kind);
      rep["hypothesis"]["indices"] = search.indices;
      rep["hypothesis"]["tuples_examined"] = search.tuples_examined;
    } catch (const TupleBudgetError& e) {
      rep["hypothesis"] = hypothesis_json(Hypothesis{e.best.hypothesis}, kind);
      rep["hypothesis"]["indices"] = e.best.indices;
      rep["hypothesis"]["tuples_examined"] = e.best.tuples_examined;
      rep["hypothesis"]["budget_exhausted"] = true;
      rep["errors"] = json{{"valid", e.best.error}};
      rep["checks"] = checks;
      timings["erm"] = sw.lap();
      throw fail("erm", e);
    }
  }
  timings["erm"] = sw.lap();

  LabeledDataset test = sampler.draw_rest(config.n_test, RngDomain::test, "test");
  double train_err = dataset_error(hyp, train);
  double test_err = dataset_error(hyp, test);
  rep["errors"] = finish_errors(config, source, train_err, valid_err, test_err);
  timings["evaluate"] = sw.lap();

  if (source.planted) {
    CorrelationResidual cr = correlation_residual(source.planted->target, v, test,
                                                  config.mc_residual, config.seed, config.threads);
    double bound = config.epsilon + 3.0 * cr.std_err;
    checks["correlation_residual"] = json{{"value", cr.value},
                                          {"std_err", cr.std_err},
                                          {"bound", bound},
                                          {"ok", cr.value <= bound}};
  }
  rep["checks"] = checks;
  timings["residual"] = sw.lap();
  timings["total"] = total_sw.total();
  rep["timings"] = timings;
  return rep;
}

json run_algorithm1(const LearnerConfig& config, const DataSource& source) {
  if (config.task != LearnTask::halfspace) throw InputError("task must be halfspace");
  return run_learner(config, source);
}

json run_algorithm2(const LearnerConfig& config, const DataSource& source) {
  if (config.task != LearnTask::boolean_k) throw InputError("task must be boolean");
  return run_learner(config, source);
}

json run_intersection(const LearnerConfig& config, const DataSource& source) {
  if (config.task != LearnTask::intersection) throw InputError("task must be intersection");
  return run_learner(config, source);
}

json baseline_l2(const LearnerConfig& config, const DataSource& source) {
  check_source(source);
  Resolved r = resolve(config);
  json rep = empty_report(config, r);
  json timings = json::object();
  Stopwatch total_sw, sw;

  Sampler sampler{&config, &source, 0};
  LabeledDataset train = sampler.draw(r.n1, RngDomain::train, "train");
  timings["sampling"] = sw.lap();

  HermiteFeatures feats(config.dim, r.k);
  Eigen::MatrixXd phi = feats.eval_rows(train.x);
  Eigen::VectorXd yv(train.size());
  for (long long i = 0; i < train.size(); ++i) yv[i] = train.y[static_cast<std::size_t>(i)];
  Eigen::MatrixXd gram = phi.transpose() * phi;
  Eigen::VectorXd rhs = phi.transpose() * yv;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXd c;
  bool ridge = false;
  if (ldlt.info() == Eigen::Success) c = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !c.allFinite() ||
      (gram * c - rhs).norm() > 1e-6 * (rhs.norm() + 1.0)) {
    ridge = true;
    gram.diagonal().array() += 1e-8;
    c = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
  }
  PolyCoeffs p;
  p.d = config.dim;
  p.k = r.k;
  p.c = c;
  double ls_objective = (phi * c - yv).squaredNorm() / static_cast<double>(train.size());
  rep["solver"] = json{{"objective", ls_objective}, {"ridge_fallback", ridge}};
  timings["solve"] = sw.lap();

  rep["hypothesis"] = json{{"kind", "ptf"}, {"text", poly_to_text(p)}};
  LabeledDataset test = sampler.draw_rest(config.n_test, RngDomain::test, "test");
  auto sign_error = [&](const LabeledDataset& data) {
    long long wrong = 0;
    Eigen::VectorXd buf(feats.dim());
    for (long long i = 0; i < data.size(); ++i) {
      feats.eval(data.x.row(i).data(), buf.data());
      if (sign_pm(c.dot(buf)) != data.y[static_cast<std::size_t>(i)]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.size());
  };
  double train_err = sign_error(train);
  double test_err = sign_error(test);
  rep["errors"] = finish_errors(config, source, train_err, json(nullptr), test_err);
  timings["evaluate"] = sw.lap();
  timings["total"] = total_sw.total();
  rep["timings"] = timings;
  return rep;
}

json brute_force_proper(const LearnerConfig& config, const DataSource& source) {
  check_source(source);
  if (config.dim > 3) throw InputError("brute force is limited to dim <= 3");
  if (config.task != LearnTask::halfspace) throw InputError("brute force handles halfspaces only");
  Resolved r = resolve(config);
  json rep = empty_report(config, r);
  json timings = json::object();
  Stopwatch total_sw, sw;
  auto fail = [&](const char* stage, const std::exception& e) {
    timings["total"] = total_sw.total();
    rep["timings"] = timings;
    rep["failed_stage"] = stage;
    return RunError(e.what(), rep);
  };

  Subspace full;
  full.basis = Eigen::MatrixXd::Identity(config.dim, config.dim);
  full.eigenvalues = Eigen::VectorXd::Ones(config.dim);
  Cover cover;
  try {
    cover = build_cover(full, config.epsilon / 4.0, config.max_cover, config.seed);
  } catch (const CoverBudgetError& e) {
    timings["cover"] = sw.lap();
    throw fail("cover", e);
  }
  rep["cover"] = cover_json(cover);
  rep["subspace"] = subspace_json(full, static_cast<double>(config.dim));
  timings["cover"] = sw.lap();

  long long n2 = config.n2 >= 0 ? config.n2 : n2_formula(config, static_cast<long long>(cover.items.size()));
  rep["config"]["n2"] = n2;
  Sampler sampler{&config, &source, 0};
  LabeledDataset valid = sampler.draw(n2, RngDomain::valid, "validation");
  timings["sampling"] = sw.lap();

  ErmResult er = erm_halfspace(cover, valid, config.threads);
  Hypothesis hyp = cover.items[static_cast<std::size_t>(er.index)];
  rep["hypothesis"] = hypothesis_json(hyp, "halfspace");
  rep["hypothesis"]["index"] = er.index;
  timings["erm"] = sw.lap();

  LabeledDataset test = sampler.draw_rest(config.n_test, RngDomain::test, "test");
  double test_err = dataset_error(hyp, test);
  rep["errors"] = finish_errors(config, source, json(nullptr), er.error, test_err);
  timings["evaluate"] = sw.lap();
  timings["total"] = total_sw.total();
  rep["timings"] = timings;
  return rep;
}

json config_to_json(const LearnerConfig& c) {
  return json{{"task", task_name(c.task)},
              {"dim", c.dim},
              {"K", c.K},
              {"epsilon", c.epsilon},
              {"delta", c.delta},
              {"c0", c.c0},
              {"cnu", c.c_nu},
              {"cover_c", c.cover_c},
              {"mu", c.mu},
              {"nu", c.nu},
              {"eta", c.eta},
              {"degree_k", c.degree_k},
              {"max_degree", c.max_degree},
              {"max_k", c.max_k},
              {"cover_accuracy", c.cover_accuracy},
              {"opt_tolerance", c.opt_tolerance},
              {"trunc_radius", c.trunc_radius},
              {"n1", c.n1},
              {"n2", c.n2},
              {"n_test", c.n_test},
              {"seed", c.seed},
              {"max_cover", c.max_cover},
              {"max_tuples", c.max_tuples},
              {"max_iterations", c.max_iterations},
              {"polish_iterations", c.polish_iterations},
              {"mc_residual", c.mc_residual},
              {"threads", c.threads}};
}

Hypothesis hypothesis_from_json(const json& j) {
  try {
    std::string kind = j.at("kind").get<std::string>();
    auto parse_half = [](const json& h) {
      Halfspace out;
      std::vector<double> w = h.at("w").get<std::vector<double>>();
      out.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
      out.t = h.at("t").get<double>();
      return out;
    };
    if (kind == "halfspace") return parse_half(j);
    if (kind == "boolean" || kind == "intersection") {
      BooleanHypothesis b;
      for (const auto& part : j.at("parts")) b.parts.push_back(parse_half(part));
      if (b.parts.empty() || b.parts.size() > 16) throw InputError("parts must number 1 to 16");
      for (const auto& p : b.parts)
        if (p.w.size() != b.parts.front().w.size())
          throw InputError("parts disagree on dimension");
      if (kind == "intersection" && !j.contains("table")) {
        b.table = BooleanHypothesis::intersection_table(static_cast<int>(b.parts.size()));
      } else {
        std::string t = j.at("table").get<std::string>();
        if (t.size() != (std::size_t(1) << b.parts.size()))
          throw InputError("table length must be 2^K");
        for (char ch : t) {
          if (ch != '+' && ch != '-') throw InputError("table characters must be + or -");
          b.table.push_back(ch == '+' ? 1 : -1);
        }
      }
      return b;
    }
    throw InputError("unknown hypothesis kind: " + kind);
  } catch (const json::exception& e) {
    throw InputError(std::string("hypothesis parse: ") + e.what());
  }
}

PlantedModel planted_from_json(const json& j) {
  PlantedModel m;
  try {
    m.target = hypothesis_from_json(j.at("concept"));
    std::string noise = j.value("noise", std::string("none"));
    if (noise == "none")
      m.noise = NoiseKind::none;
    else if (noise == "rcn")
      m.noise = NoiseKind::rcn;
    else if (noise == "slab")
      m.noise = NoiseKind::slab;
    else
      throw InputError("unknown noise kind: " + noise);
    m.noise_p = j.value("p", 0.0);
  } catch (const json::exception& e) {
    throw InputError(std::string("planted model parse: ") + e.what());
  }
  return m;
}

LearnerConfig config_from_json(const json& j) {
  static const std::set<std::string> known{
      "task",          "dim",       "K",          "epsilon",
      "delta",         "c0",        "cnu",        "cover_c",
      "mu",            "nu",        "eta",        "degree_k",
      "max_degree",    "max_k",     "cover_accuracy", "opt_tolerance",
      "trunc_radius",  "n1",        "n2",         "n_test",
      "seed",          "max_cover", "max_tuples", "max_iterations",
      "polish_iterations", "mc_residual", "threads"};
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw InputError("unknown config key: " + item.key());
  LearnerConfig c;
  try {
    if (j.contains("task")) c.task = task_from_name(j.at("task").get<std::string>());
    c.dim = j.value("dim", c.dim);
    c.K = j.value("K", c.K);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.delta = j.value("delta", c.delta);
    c.c0 = j.value("c0", c.c0);
    c.c_nu = j.value("cnu", c.c_nu);
    c.cover_c = j.value("cover_c", c.cover_c);
    c.mu = j.value("mu", c.mu);
    c.nu = j.value("nu", c.nu);
    c.eta = j.value("eta", c.eta);
    c.degree_k = j.value("degree_k", c.degree_k);
    c.max_degree = j.value("max_degree", c.max_degree);
    c.max_k = j.value("max_k", c.max_k);
    c.cover_accuracy = j.value("cover_accuracy", c.cover_accuracy);
    c.opt_tolerance = j.value("opt_tolerance", c.opt_tolerance);
    c.trunc_radius = j.value("trunc_radius", c.trunc_radius);
    c.n1 = j.value("n1", c.n1);
    c.n2 = j.value("n2", c.n2);
    c.n_test = j.value("n_test", c.n_test);
    c.seed = j.value("seed", c.seed);
    c.max_cover = j.value("max_cover", c.max_cover);
    c.max_tuples = j.value("max_tuples", c.max_tuples);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.polish_iterations = j.value("polish_iterations", c.polish_iterations);
    c.mc_residual = j.value("mc_residual", c.mc_residual);
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw InputError(std::string("config parse: ") + e.what());
  }
  return c;
}

}  // namespace gphs
