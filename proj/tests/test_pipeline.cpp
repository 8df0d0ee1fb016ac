#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gphs/errors.hpp"
#include "gphs/pipeline.hpp"

using namespace gphs;
using nlohmann::json;

namespace {

const char* kReportKeys[] = {"config", "solver",  "subspace", "cover",
                             "hypothesis", "errors", "checks", "timings"};

PlantedModel planted_halfspace(double t = 0.3, NoiseKind noise = NoiseKind::none, double p = 0.0) {
  Halfspace h;
  h.w = Eigen::Vector2d(0.8, 0.6);
  h.t = t;
  PlantedModel m;
  m.target = h;
  m.noise = noise;
  m.noise_p = p;
  return m;
}

PlantedModel planted_xor() {
  BooleanHypothesis f;
  f.parts.resize(2);
  f.parts[0].w = Eigen::Vector2d(1.0, 0.0);
  f.parts[0].t = 0.0;
  f.parts[1].w = Eigen::Vector2d(0.0, 1.0);
  f.parts[1].t = 0.0;
  f.table = {-1, 1, 1, -1};
  PlantedModel m;
  m.target = f;
  return m;
}

PlantedModel planted_intersection() {
  BooleanHypothesis f;
  f.parts.resize(2);
  f.parts[0].w = Eigen::Vector2d(1.0, 0.0);
  f.parts[0].t = 0.5;
  f.parts[1].w = Eigen::Vector2d(0.0, 1.0);
  f.parts[1].t = 0.5;
  f.table = BooleanHypothesis::intersection_table(2);
  PlantedModel m;
  m.target = f;
  return m;
}

LearnerConfig smoke_config(LearnTask task) {
  LearnerConfig c;
  c.task = task;
  c.dim = 2;
  c.epsilon = 0.3;
  c.delta = 0.05;
  c.seed = 5;
  c.n_test = 10000;
  c.opt_tolerance = 2e-3;
  c.max_iterations = 40000;
  c.polish_iterations = 40000;
  if (task == LearnTask::halfspace) {
    c.degree_k = 3;
    c.n1 = 1500;
  } else {
    c.K = 2;
    c.degree_k = 2;
    c.n1 = 1200;
    c.cover_accuracy = 0.35;
    c.mc_residual = 64;
  }
  return c;
}

void check_report_shape(const json& rep) {
  for (const char* key : kReportKeys) REQUIRE(rep.contains(key));
  REQUIRE(rep["errors"].is_object());
  CHECK(rep["errors"].contains("train"));
  CHECK(rep["errors"].contains("valid"));
  CHECK(rep["errors"].contains("test"));
  CHECK(rep["errors"].contains("epsilon"));
  CHECK(rep["errors"].contains("opt_ub"));
  CHECK(rep["errors"].contains("guarantee_ok"));
  REQUIRE(rep["checks"].is_object());
  REQUIRE(rep["checks"].contains("dim_bound"));
  CHECK(rep["timings"].contains("total"));
}

}  // namespace

TEST_CASE("halfspace pipeline smoke run") {
  PlantedModel m = planted_halfspace(0.3, NoiseKind::rcn, 0.05);
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  json rep = run_algorithm1(c, src);

  check_report_shape(rep);
  CHECK(rep["config"]["task"] == "halfspace");
  CHECK(rep["config"]["degree_k"] == 3);
  CHECK(rep["solver"]["certified"] == true);
  CHECK(rep["checks"]["dim_bound"]["ok"] == true);
  CHECK(rep["subspace"]["dim"].get<int>() >= 1);
  CHECK(rep["hypothesis"]["kind"] == "halfspace");
  CHECK(rep["errors"]["opt_ub"] == doctest::Approx(0.05));
  CHECK(rep["errors"]["test"].get<double>() < 0.05 + c.epsilon);
  CHECK(rep["errors"]["guarantee_ok"] == true);
  CHECK(rep["checks"]["correlation_residual"]["ok"] == true);

  // dim bound is the claimed tr(M^{1/2}) / sqrt(eta)
  double ts = rep["subspace"]["trace_sqrt"].get<double>();
  double eta = rep["config"]["eta"].get<double>();
  CHECK(rep["checks"]["dim_bound"]["bound"].get<double>() ==
        doctest::Approx(ts / std::sqrt(eta)).epsilon(1e-12));

  // n2 echo matches the sample-size formula at the reported cover size
  double log_h = std::log(rep["cover"]["size"].get<double>());
  long long n2 = static_cast<long long>(
      std::ceil(8.0 * (log_h + std::log(1.0 / c.delta)) / (c.epsilon * c.epsilon)));
  CHECK(rep["config"]["n2"].get<long long>() == n2);
}

TEST_CASE("boolean pipeline smoke run recovers an XOR") {
  PlantedModel m = planted_xor();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::boolean_k);
  json rep = run_algorithm2(c, src);

  check_report_shape(rep);
  CHECK(rep["config"]["task"] == "boolean");
  CHECK(rep["hypothesis"]["kind"] == "boolean");
  CHECK(rep["hypothesis"]["indices"].size() == 2);
  CHECK(rep["checks"]["dim_bound"]["ok"] == true);
  CHECK(rep["errors"]["test"].get<double>() < 0.3);
  CHECK(rep["errors"]["guarantee_ok"] == true);

  double log_h = std::log(rep["cover"]["size"].get<double>());
  long long n2 = static_cast<long long>(std::ceil(
      8.0 * (2.0 * log_h + 4.0 + std::log(1.0 / c.delta)) / (c.epsilon * c.epsilon)));
  CHECK(rep["config"]["n2"].get<long long>() == n2);
}

TEST_CASE("intersection pipeline smoke run") {
  PlantedModel m = planted_intersection();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::intersection);
  json rep = run_intersection(c, src);

  check_report_shape(rep);
  CHECK(rep["config"]["task"] == "intersection");
  CHECK(rep["hypothesis"]["kind"] == "intersection");
  CHECK(rep["hypothesis"]["table"] == "---+");
  CHECK(rep["errors"]["test"].get<double>() < 0.3);
  CHECK(rep["errors"]["guarantee_ok"] == true);
}

TEST_CASE("pipeline is deterministic apart from timings") {
  PlantedModel m = planted_halfspace();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  json a = run_learner(c, src);
  json b = run_learner(c, src);
  a.erase("timings");
  b.erase("timings");
  CHECK(a == b);
}

TEST_CASE("near-coin-flip labels cannot be learned far below one half") {
  PlantedModel m = planted_halfspace(0.0, NoiseKind::rcn, 0.45);
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  json rep = run_learner(c, src);
  CHECK(rep["errors"]["test"].get<double>() > 0.40);
  CHECK(rep["errors"]["test"].get<double>() < 0.57);
}

TEST_CASE("external datasets are split by position and carry no opt bound") {
  PlantedModel m = planted_halfspace();
  LabeledDataset rows = sample_dataset(m, 2, 800 + 400 + 500, 77, RngDomain::misc);
  DataSource src{nullptr, &rows};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  c.n1 = 800;
  c.n2 = 400;
  json rep = run_learner(c, src);
  check_report_shape(rep);
  CHECK(rep["config"]["n2"] == 400);
  CHECK(rep["errors"]["opt_ub"].is_null());
  CHECK(rep["errors"]["guarantee_ok"].is_null());
  CHECK(rep["checks"]["correlation_residual"].is_null());
  CHECK(rep["errors"]["test"].get<double>() < 0.2);

  LabeledDataset tiny = sample_dataset(m, 2, 100, 78, RngDomain::misc);
  DataSource small{nullptr, &tiny};
  CHECK_THROWS_AS(run_learner(c, small), InputError);

  DataSource both{&m, &rows};
  CHECK_THROWS_AS(run_learner(c, both), InputError);
  DataSource neither{nullptr, nullptr};
  CHECK_THROWS_AS(run_learner(c, neither), InputError);
}

TEST_CASE("solver failure surfaces as a partial report") {
  PlantedModel m = planted_halfspace();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  c.opt_tolerance = 1e-12;
  c.max_iterations = 3;
  c.polish_iterations = 0;
  try {
    run_learner(c, src);
    FAIL("expected RunError");
  } catch (const RunError& e) {
    CHECK(e.report["failed_stage"] == "solve");
    CHECK(e.report["solver"]["certified"] == false);
    CHECK(e.report["solver"]["iterations"] == 3);
    CHECK(e.report["cover"].is_null());
    CHECK(e.report["timings"].contains("total"));
  }
}

TEST_CASE("tuple budget exhaustion surfaces as a partial report") {
  PlantedModel m = planted_xor();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::boolean_k);
  c.max_tuples = 10;
  try {
    run_learner(c, src);
    FAIL("expected RunError");
  } catch (const RunError& e) {
    CHECK(e.report["failed_stage"] == "erm");
    CHECK(e.report["hypothesis"]["budget_exhausted"] == true);
    CHECK(e.report["hypothesis"]["tuples_examined"] == 10);
    CHECK(e.report["errors"]["valid"].get<double>() <= 1.0);
  }
}

TEST_CASE("task dispatch and guards") {
  PlantedModel m = planted_halfspace();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);

  LearnerConfig boolean = smoke_config(LearnTask::boolean_k);
  CHECK_THROWS_AS(run_algorithm1(boolean, src), InputError);
  CHECK_THROWS_AS(run_algorithm2(c, src), InputError);
  CHECK_THROWS_AS(run_intersection(c, src), InputError);

  LearnerConfig big_k = smoke_config(LearnTask::boolean_k);
  big_k.K = 4;  // max_k defaults to 3
  CHECK_THROWS_AS(run_learner(big_k, src), InputError);

  LearnerConfig bad = c;
  bad.epsilon = 0.6;
  CHECK_THROWS_AS(run_learner(bad, src), InputError);
  bad = c;
  bad.dim = 0;
  CHECK_THROWS_AS(run_learner(bad, src), InputError);
}

TEST_CASE("baseline_l2 fits a polynomial threshold function") {
  PlantedModel m = planted_halfspace();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  json rep = baseline_l2(c, src);
  CHECK(rep["hypothesis"]["kind"] == "ptf");
  CHECK(rep["solver"].contains("ridge_fallback"));
  CHECK(rep["errors"]["test"].get<double>() < 0.45);
  CHECK(rep["timings"].contains("total"));
}

TEST_CASE("brute_force_proper nearly matches the planted halfspace") {
  PlantedModel m = planted_halfspace();
  DataSource src{&m, nullptr};
  LearnerConfig c = smoke_config(LearnTask::halfspace);
  c.n_test = 20000;
  json rep = brute_force_proper(c, src);
  CHECK(rep["hypothesis"]["kind"] == "halfspace");
  CHECK(rep["errors"]["test"].get<double>() < 0.1);
  CHECK(rep["errors"]["guarantee_ok"] == true);

  LearnerConfig wide = c;
  wide.dim = 4;
  CHECK_THROWS_AS(brute_force_proper(wide, src), InputError);
  LearnerConfig boolean = smoke_config(LearnTask::boolean_k);
  CHECK_THROWS_AS(brute_force_proper(boolean, src), InputError);
}

TEST_CASE("config json round-trip and unknown keys") {
  LearnerConfig c;
  c.task = LearnTask::boolean_k;
  c.K = 2;
  c.epsilon = 0.2;
  c.nu = 0.015;
  c.seed = 99;
  json j = config_to_json(c);
  LearnerConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);

  json unknown = j;
  unknown["mystery"] = 1;
  CHECK_THROWS_AS(config_from_json(unknown), InputError);
  CHECK_THROWS_AS(config_from_json(json::array()), InputError);
  json bad_type = j;
  bad_type["dim"] = "two";
  CHECK_THROWS_AS(config_from_json(bad_type), InputError);
  json bad_task = j;
  bad_task["task"] = "perceptron";
  CHECK_THROWS_AS(config_from_json(bad_task), InputError);
}

TEST_CASE("hypothesis json parsing") {
  json h = {{"kind", "halfspace"}, {"w", {0.6, 0.8}}, {"t", -0.25}};
  Hypothesis hyp = hypothesis_from_json(h);
  REQUIRE(std::holds_alternative<Halfspace>(hyp));
  CHECK(std::get<Halfspace>(hyp).t == -0.25);
  CHECK(std::get<Halfspace>(hyp).w[1] == 0.8);

  json b = {{"kind", "boolean"},
            {"parts", {{{"w", {1.0, 0.0}}, {"t", 0.0}}, {{"w", {0.0, 1.0}}, {"t", 0.0}}}},
            {"table", "-++-"}};
  Hypothesis bh = hypothesis_from_json(b);
  REQUIRE(std::holds_alternative<BooleanHypothesis>(bh));
  CHECK(std::get<BooleanHypothesis>(bh).table == std::vector<std::int8_t>{-1, 1, 1, -1});

  json inter = {{"kind", "intersection"},
                {"parts", {{{"w", {1.0, 0.0}}, {"t", 0.5}}, {{"w", {0.0, 1.0}}, {"t", 0.5}}}}};
  Hypothesis ih = hypothesis_from_json(inter);
  CHECK(std::get<BooleanHypothesis>(ih).table == BooleanHypothesis::intersection_table(2));

  CHECK_THROWS_AS(hypothesis_from_json(json{{"kind", "tree"}}), InputError);
  CHECK_THROWS_AS(hypothesis_from_json(json{{"kind", "halfspace"}}), InputError);
  json short_table = b;
  short_table["table"] = "-+";
  CHECK_THROWS_AS(hypothesis_from_json(short_table), InputError);
  json bad_char = b;
  bad_char["table"] = "-+x-";
  CHECK_THROWS_AS(hypothesis_from_json(bad_char), InputError);
  json mismatch = b;
  mismatch["parts"][1]["w"] = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(hypothesis_from_json(mismatch), InputError);
}

TEST_CASE("planted model json parsing") {
  json j = {{"concept", {{"kind", "halfspace"}, {"w", {1.0, 0.0}}, {"t", 0.0}}},
            {"noise", "rcn"},
            {"p", 0.1}};
  PlantedModel m = planted_from_json(j);
  CHECK(m.noise == NoiseKind::rcn);
  CHECK(m.noise_p == 0.1);
  CHECK(planted_opt(m) == 0.1);

  json plain = {{"concept", {{"kind", "halfspace"}, {"w", {1.0, 0.0}}, {"t", 0.0}}}};
  CHECK(planted_from_json(plain).noise == NoiseKind::none);

  json bad_noise = j;
  bad_noise["noise"] = "adversarial";
  CHECK_THROWS_AS(planted_from_json(bad_noise), InputError);
  CHECK_THROWS_AS(planted_from_json(json{{"noise", "rcn"}}), InputError);
}

TEST_CASE("timings are non-negative and total covers the stages") {
  PlantedModel m = planted_halfspace();
  DataSource src{&m, nullptr};
  json rep = run_learner(smoke_config(LearnTask::halfspace), src);
  double total = rep["timings"]["total"].get<double>();
  double sum = 0.0;
  for (const auto& item : rep["timings"].items()) {
    CHECK(item.value().get<double>() >= 0.0);
    if (item.key() != "total") sum += item.value().get<double>();
  }
  CHECK(total >= 0.0);
  CHECK(sum <= total + 0.05);
}
