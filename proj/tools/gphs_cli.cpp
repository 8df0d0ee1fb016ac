#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gphs/capi.h"

namespace {

using nlohmann::json;

/// Deterministic generator for --random-target; independent of the library's
/// streams so planted targets are a pure function of the CLI seed.
struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }
  double normal() {
    const double u = uniform(), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }
};

json random_halfspace(SplitMix& g, int dim, double t) {
  std::vector<double> w(static_cast<std::size_t>(dim));
  double norm2 = 0.0;
  for (double& x : w) {
    x = g.normal();
    norm2 += x * x;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  json jw = json::array();
  for (double x : w) jw.push_back(x * inv);
  return {{"w", jw}, {"t", t}};
}

json random_concept(const std::string& task, int dim, int parts_k, std::uint64_t seed) {
  SplitMix g(seed * 0x9E3779B97F4A7C15ull + 12345);
  if (task == "halfspace") {
    json h = random_halfspace(g, dim, 0.0);
    h["kind"] = "halfspace";
    return h;
  }
  json parts = json::array();
  const double thr[3] = {0.0, 0.5, -0.5};
  for (int j = 0; j < parts_k; ++j)
    parts.push_back(random_halfspace(g, dim, task == "intersection" ? 0.5 : thr[j % 3]));
  if (task == "intersection") return {{"kind", "intersection"}, {"parts", parts}};
  std::string table;
  for (int c = 0; c < (1 << parts_k); ++c) table += (g.next() & 1u) ? '+' : '-';
  if (table.find('+') == std::string::npos) table[0] = '+';
  if (table.find('-') == std::string::npos) table[0] = '-';
  return {{"kind", "boolean"}, {"parts", parts}, {"table", table}};
}

json parse_inline_or_file(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream f(text.substr(1), std::ios::binary);
    if (!f) throw std::invalid_argument(std::string("cannot open ") + text.substr(1));
    std::ostringstream ss;
    ss << f.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

/// Config flags registered per subcommand; only flags the user set are
/// forwarded, so the library's defaults stay authoritative.
struct ConfigOpts {
  int dim = 2, parts_k = 1, degree = -1, max_degree = 8, max_k = 3, mc_residual = 256,
      threads = 1;
  double epsilon = 0.1, delta = 0.05, mu = 1.0 / 128.0, nu = -1.0, eta = -1.0, c0 = 1.0,
         cnu = 0.125, cover_c = 1.0, cover_accuracy = -1.0, opt_tolerance = -1.0,
         trunc_radius = 0.0;
  long long n1 = -1, n2 = -1, n_test = 100000, max_cover = 2000000, max_tuples = 50000000,
            max_iterations = 200000, polish = 2000;
  std::uint64_t seed = 1;

  std::vector<std::pair<CLI::Option*, std::function<void(json&)>>> emits;

  void wire(CLI::App* s) {
    auto reg = [this, s](const char* flag, auto& var, const char* key, const char* desc) {
      CLI::Option* o = s->add_option(flag, var, desc);
      emits.emplace_back(o, [&var, key](json& j) { j[key] = var; });
    };
    reg("--dim", dim, "dim", "ambient dimension");
    reg("--K", parts_k, "K", "halfspaces in the target class");
    reg("--epsilon", epsilon, "epsilon", "target excess error");
    reg("--delta", delta, "delta", "failure probability");
    reg("--k,--degree", degree, "degree_k", "Hermite degree override");
    reg("--mu", mu, "mu", "ridge weight");
    reg("--nu", nu, "nu", "nuclear-norm weight override");
    reg("--eta", eta, "eta", "eigenvalue threshold override");
    reg("--c0", c0, "c0", "degree and threshold constant C0");
    reg("--cnu", cnu, "cnu", "nu formula constant");
    reg("--cover-c", cover_c, "cover_c", "cover accuracy constant");
    reg("--cover-accuracy", cover_accuracy, "cover_accuracy", "cover accuracy override");
    reg("--opt-tolerance", opt_tolerance, "opt_tolerance", "solver certification target");
    reg("--trunc-radius", trunc_radius, "trunc_radius", "feature truncation radius override");
    reg("--n-train", n1, "n1", "regression sample size");
    reg("--n-valid", n2, "n2", "validation sample size");
    reg("--n-test", n_test, "n_test", "test sample size");
    reg("--seed", seed, "seed", "master seed");
    reg("--max-degree", max_degree, "max_degree", "degree cap");
    reg("--max-k", max_k, "max_k", "largest accepted K");
    reg("--max-cover", max_cover, "max_cover", "cover size budget");
    reg("--max-tuples", max_tuples, "max_tuples", "tuple search budget");
    reg("--max-iterations", max_iterations, "max_iterations", "solver iteration budget");
    reg("--polish-iterations", polish, "polish_iterations", "descent polish budget");
    reg("--mc-residual", mc_residual, "mc_residual", "averaging draws per point");
    reg("--threads", threads, "threads", "worker threads");
  }

  json to_json(const std::string& task) const {
    json j;
    j["task"] = task;
    for (const auto& [opt, emit] : emits)
      if (opt->count() > 0) emit(j);
    return j;
  }
};

struct DataOpts {
  std::string dataset, planted, noise = "none";
  double noise_p = 0.0;
  bool random_target = false;

  void wire(CLI::App* s) {
    s->add_option("--dataset", dataset, "labeled dataset file (text or binary)");
    s->add_option("--planted", planted, "planted model JSON, inline or @file");
    s->add_flag("--random-target", random_target, "plant a seed-derived random target");
    s->add_option("--noise", noise, "label noise model")
        ->check(CLI::IsMember({"none", "rcn", "slab"}));
    s->add_option("--noise-p", noise_p, "label noise parameter p");
  }

  json to_json(const std::string& task, int dim, int parts_k, std::uint64_t seed) const {
    if (!dataset.empty()) return {{"path", dataset}};
    if (!planted.empty()) return {{"planted", parse_inline_or_file(planted, "planted model")}};
    if (!random_target)
      throw std::invalid_argument("provide --dataset, --planted, or --random-target");
    json pl = {{"concept", random_concept(task, dim, parts_k, seed)},
               {"noise", noise},
               {"p", noise_p}};
    return {{"planted", pl}};
  }
};

int write_output(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  f << text << "\n";
  f.close();
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
    return 4;
  }
  return 0;
}

int finish_report(gphs_status st, char* report, const std::string& out) {
  std::string text = report != nullptr ? report : "";
  gphs_string_free(report);
  if (st != GPHS_OK) std::fprintf(stderr, "error: %s\n", gphs_last_error());
  if (!text.empty()) {
    const int wrc = write_output(text, out);
    if (wrc != 0) return wrc;
  }
  return static_cast<int>(st);
}

int run_learn(const std::string& task, const ConfigOpts& cfg, const DataOpts& data,
              const std::string& out, int runner) {
  json config = cfg.to_json(task);
  config["data"] = data.to_json(task, cfg.dim, cfg.parts_k, cfg.seed);
  const std::string dumped = config.dump();
  char* report = nullptr;
  gphs_status st;
  if (runner == 1)
    st = gphs_run_baseline_l2(dumped.c_str(), &report);
  else if (runner == 2)
    st = gphs_run_brute_force(dumped.c_str(), &report);
  else
    st = gphs_run_learner(dumped.c_str(), &report);
  return finish_report(st, report, out);
}

int run_gen_data(const std::string& task, int dim, long long n, std::uint64_t seed,
                 const std::string& domain, int parts_k, const DataOpts& data,
                 const std::string& out, bool binary) {
  json source = data.to_json(task, dim, parts_k, seed);
  if (!source.contains("planted"))
    throw std::invalid_argument("gen-data needs --planted or --random-target");
  json spec = {{"dim", dim}, {"n", n}, {"seed", seed}, {"domain", domain},
               {"planted", source["planted"]}};
  const std::string dumped = spec.dump();
  gphs_dataset* ds = nullptr;
  gphs_status st = gphs_dataset_generate(dumped.c_str(), &ds);
  if (st == GPHS_OK) st = gphs_dataset_write(ds, out.c_str(), binary ? 1 : 0);
  gphs_dataset_free(ds);
  if (st != GPHS_OK) {
    std::fprintf(stderr, "error: %s\n", gphs_last_error());
    return static_cast<int>(st);
  }
  std::fprintf(stderr, "wrote %lld points of dimension %d to %s\n", n, dim, out.c_str());
  return 0;
}

int run_verify(const std::string& suites, int threads, const std::string& out) {
  char* report = nullptr;
  gphs_status st = gphs_run_verify(suites.c_str(), threads, &report);
  std::string text = report != nullptr ? report : "";
  gphs_string_free(report);
  if (!text.empty()) {
    const json r = json::parse(text);
    for (const auto& [suite, checks] : r["suites"].items())
      for (const auto& c : checks)
        std::fprintf(stderr, "%s %s.%s value=%.3g tolerance=%.3g\n",
                     c["pass"].get<bool>() ? "PASS" : "FAIL", suite.c_str(),
                     c["name"].get<std::string>().c_str(), c["value"].get<double>(),
                     c["tolerance"].get<double>());
  } else {
    std::fprintf(stderr, "error: %s\n", gphs_last_error());
    return static_cast<int>(st);
  }
  const int wrc = write_output(text, out);
  if (wrc != 0) return wrc;
  return static_cast<int>(st);
}

template <class F>
int guard(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agnostic learners for halfspaces and Boolean functions of halfspaces under "
               "Gaussian marginals",
               "gphs"};
  app.require_subcommand(1);
  int rc = 0;

  struct LearnCmd {
    ConfigOpts cfg;
    DataOpts data;
    std::string out;
  };
  const std::vector<std::pair<const char*, std::pair<std::string, int>>> kLearners = {
      {"learn-halfspace", {"halfspace", 0}},
      {"learn-boolean", {"boolean", 0}},
      {"learn-intersection", {"intersection", 0}},
      {"baseline-l2", {"halfspace", 1}},
      {"brute-force", {"halfspace", 2}},
  };
  std::vector<std::unique_ptr<LearnCmd>> cmds;
  for (const auto& [name, spec] : kLearners) {
    auto cmd = std::make_unique<LearnCmd>();
    CLI::App* sub = app.add_subcommand(name, std::string("run ") + name);
    cmd->cfg.wire(sub);
    cmd->data.wire(sub);
    sub->add_option("--out", cmd->out, "write the JSON report here (default stdout)");
    LearnCmd* c = cmd.get();
    const std::string task = spec.first;
    const int runner = spec.second;
    sub->callback([&rc, c, task, runner]() {
      rc = guard([&]() { return run_learn(task, c->cfg, c->data, c->out, runner); });
    });
    cmds.push_back(std::move(cmd));
  }

  struct GenCmd {
    int dim = 2;
    long long n = 1000;
    std::uint64_t seed = 1;
    std::string domain = "train", task = "halfspace", out;
    int parts_k = 1;
    bool binary = false;
    DataOpts data;
  } gen;
  {
    CLI::App* sub = app.add_subcommand("gen-data", "generate a labeled Gaussian dataset");
    sub->add_option("--dim", gen.dim, "ambient dimension");
    sub->add_option("--n", gen.n, "number of points");
    sub->add_option("--seed", gen.seed, "generation seed");
    sub->add_option("--domain", gen.domain, "stream domain")
        ->check(CLI::IsMember({"train", "valid", "test"}));
    sub->add_option("--task", gen.task, "shape of --random-target")
        ->check(CLI::IsMember({"halfspace", "boolean", "intersection"}));
    sub->add_option("--K", gen.parts_k, "halfspaces in --random-target");
    sub->add_flag("--binary", gen.binary, "write the binary format");
    sub->add_option("--out", gen.out, "output path")->required();
    gen.data.wire(sub);
    sub->callback([&rc, &gen]() {
      rc = guard([&]() {
        return run_gen_data(gen.task, gen.dim, gen.n, gen.seed, gen.domain, gen.parts_k,
                            gen.data, gen.out, gen.binary);
      });
    });
  }

  struct VerifyCmd {
    std::string suites, out;
    int threads = 1;
  } ver;
  {
    CLI::App* sub = app.add_subcommand("verify", "run the property suites");
    sub->add_option("--suites", ver.suites,
                    "comma-separated subset of hermite,nuclear,poincare,ou,cover,cellerm");
    sub->add_option("--threads", ver.threads, "worker threads");
    sub->add_option("--out", ver.out, "write the JSON report here (default stdout)");
    sub->callback([&rc, &ver]() {
      rc = guard([&]() { return run_verify(ver.suites, ver.threads, ver.out); });
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }
  return rc;
}
