#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "gphs/dataset.hpp"
#include "gphs/errors.hpp"

namespace gphs {

enum class LearnTask { halfspace, boolean_k, intersection };

/// Full configuration of a learning run. Negative values request the
/// documented formula or calibration default; the resolved values are echoed
/// in the report.
struct LearnerConfig {
  LearnTask task = LearnTask::halfspace;
  int dim = 2;
  int K = 1;  // parts for boolean/intersection tasks
  double epsilon = 0.1;
  double delta = 0.05;
  double c0 = 1.0;     // C0 in the degree/eta formulas
  double c_nu = 0.125;   // c_nu in the nu formulas
  double cover_c = 0.125;  // c in the c*eps/K cover accuracy
  double mu = 1.0 / 128.0;
  double nu = -1.0;             // formula default when negative
  double eta = -1.0;            // formula default when negative
  int degree_k = -1;            // formula default capped at max_degree
  int max_degree = 8;
  int max_k = 3;                // largest accepted K
  double cover_accuracy = -1.0;  // formula default when negative
  double opt_tolerance = -1.0;   // eps^3/100 when negative
  double trunc_radius = 0.0;     // solver default when <= 0
  long long n1 = -1;     // regression sample size; calibration default when negative
  long long n2 = -1;     // validation sample size; formula when negative
  long long n_test = 100000;
  std::uint64_t seed = 1;
  long long max_cover = 2000000;
  long long max_tuples = 50000000;
  long long max_iterations = 200000;
  long long polish_iterations = 2000;
  int mc_residual = 256;  // Monte-Carlo draws per point for boolean averaging
  int threads = 1;
};

/// Where a run's samples come from: a planted model (train/validation/test are
/// generated from disjoint seed domains, OPT is known) or one external dataset
/// (split by position: n1 train, then n2 validation, remainder test).
struct DataSource {
  const PlantedModel* planted = nullptr;
  const LabeledDataset* external = nullptr;
};

/// Stage error carrying the partial report built so far (key "failed_stage"
/// names the stage).
struct RunError : ResourceError {
  nlohmann::json report;
  RunError(const std::string& what, nlohmann::json r) : ResourceError(what), report(std::move(r)) {}
};

/// Halfspace learner: solve -> influence matrix -> top subspace -> cover ->
/// validation ERM. Report keys: config, solver, subspace, cover, hypothesis,
/// errors, checks, timings.
nlohmann::json run_algorithm1(const LearnerConfig& config, const DataSource& source);

/// Boolean-of-K-halfspaces learner: as run_algorithm1 but with cover accuracy
/// c*eps/K and the tuple search over Boolean maps.
nlohmann::json run_algorithm2(const LearnerConfig& config, const DataSource& source);

/// Intersection learner: the tuple search with the conjunction table pinned.
nlohmann::json run_intersection(const LearnerConfig& config, const DataSource& source);

/// Dispatches on config.task.
nlohmann::json run_learner(const LearnerConfig& config, const DataSource& source);

/// Improper comparison point: least-squares fit of the labels on the Hermite
/// features, hypothesis sign(P). Singular normal equations fall back to a
/// 1e-8 ridge, noted in the report.
nlohmann::json baseline_l2(const LearnerConfig& config, const DataSource& source);

/// Grid search over the full-dimensional sphere x threshold grid at
/// resolution eps/4; guarded to dim <= 3.
nlohmann::json brute_force_proper(const LearnerConfig& config, const DataSource& source);

/// Parses {"kind":"halfspace","w":[...],"t":...} or {"kind":"boolean"|
/// "intersection","parts":[{"w":[...],"t":...},...],"table":"+-..."}; the
/// table may be omitted for intersections (conjunction assumed).
Hypothesis hypothesis_from_json(const nlohmann::json& j);

/// Parses {"concept": <hypothesis>, "noise": "none"|"rcn"|"slab", "p": real}.
PlantedModel planted_from_json(const nlohmann::json& j);

/// Parses a LearnerConfig from its JSON form (the "config" shape the CLI
/// emits); unknown keys are rejected.
LearnerConfig config_from_json(const nlohmann::json& j);

/// JSON echo of a resolved or raw config.
nlohmann::json config_to_json(const LearnerConfig& c);

}  // namespace gphs
