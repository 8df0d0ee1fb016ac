#include "gphs/capi.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gphs/dataset.hpp"
#include "gphs/errors.hpp"
#include "gphs/pipeline.hpp"
#include "gphs/verify.hpp"

struct gphs_dataset {
  gphs::LabeledDataset data;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gphs_status fail(gphs_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
gphs_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const gphs::InputError& e) {
    return fail(GPHS_INPUT_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(GPHS_INPUT_ERROR, e.what());
  } catch (const gphs::ResourceError& e) {
    return fail(GPHS_RESOURCE_EXCEEDED, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GPHS_RESOURCE_EXCEEDED, "out of memory");
  } catch (const std::exception& e) {
    return fail(GPHS_INTERNAL_ERROR, e.what());
  }
}

nlohmann::json parse_json(const char* text, const char* what) {
  if (text == nullptr) throw gphs::InputError(std::string(what) + " is null");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw gphs::InputError(std::string(what) + ": " + e.what());
  }
}

gphs::RngDomain domain_from_name(const std::string& name) {
  if (name == "train") return gphs::RngDomain::train;
  if (name == "valid") return gphs::RngDomain::valid;
  if (name == "test") return gphs::RngDomain::test;
  throw gphs::InputError("unknown rng domain: " + name);
}

/// Shared shape of the three report runners.
using Runner = nlohmann::json (*)(const gphs::LearnerConfig&, const gphs::DataSource&);

gphs_status run_report(const char* config_json, char** report_json, Runner runner) {
  return guarded([&]() -> gphs_status {
    if (report_json == nullptr) throw gphs::InputError("report output pointer is null");
    *report_json = nullptr;
    nlohmann::json j = parse_json(config_json, "config");
    if (!j.contains("data")) throw gphs::InputError("config needs a \"data\" object");
    nlohmann::json data = j["data"];
    j.erase("data");
    gphs::LearnerConfig cfg = gphs::config_from_json(j);

    gphs::PlantedModel planted;
    gphs::LabeledDataset external;
    gphs::DataSource source;
    if (data.is_object() && data.contains("planted")) {
      planted = gphs::planted_from_json(data["planted"]);
      source.planted = &planted;
    } else if (data.is_object() && data.contains("path")) {
      if (!data["path"].is_string()) throw gphs::InputError("data.path must be a string");
      external = gphs::read_dataset(data["path"].get<std::string>());
      source.external = &external;
    } else {
      throw gphs::InputError("data must contain \"planted\" or \"path\"");
    }

    nlohmann::json report;
    try {
      report = runner(cfg, source);
    } catch (const gphs::RunError& e) {
      if (!e.report.is_null()) *report_json = dup_string(e.report.dump(2));
      return fail(GPHS_RESOURCE_EXCEEDED, e.what());
    }
    *report_json = dup_string(report.dump(2));
    const nlohmann::json& errs = report["errors"];
    if (errs.is_object() && errs.contains("guarantee_ok") && errs["guarantee_ok"].is_boolean() &&
        !errs["guarantee_ok"].get<bool>())
      return fail(GPHS_GUARANTEE_FAILED, "test error exceeded the opt + epsilon guarantee");
    return GPHS_OK;
  });
}

}  // namespace

extern "C" {

const char* gphs_last_error(void) { return g_last_error.c_str(); }

void gphs_string_free(char* s) { std::free(s); }

gphs_status gphs_dataset_generate(const char* spec_json, gphs_dataset** out) {
  return guarded([&]() -> gphs_status {
    if (out == nullptr) throw gphs::InputError("output pointer is null");
    *out = nullptr;
    nlohmann::json j = parse_json(spec_json, "dataset spec");
    int dim = 0;
    long long n = 0;
    std::uint64_t seed = 1;
    std::string domain = "train";
    try {
      dim = j.at("dim").get<int>();
      n = j.at("n").get<long long>();
      seed = j.value("seed", std::uint64_t{1});
      domain = j.value("domain", std::string("train"));
      if (!j.contains("planted")) throw gphs::InputError("dataset spec needs \"planted\"");
    } catch (const nlohmann::json::exception& e) {
      throw gphs::InputError(std::string("dataset spec: ") + e.what());
    }
    gphs::PlantedModel model = gphs::planted_from_json(j["planted"]);
    auto handle = std::make_unique<gphs_dataset>();
    handle->data = gphs::sample_dataset(model, dim, n, seed, domain_from_name(domain));
    *out = handle.release();
    return GPHS_OK;
  });
}

gphs_status gphs_dataset_read(const char* path, gphs_dataset** out) {
  return guarded([&]() -> gphs_status {
    if (path == nullptr || out == nullptr) throw gphs::InputError("null argument");
    *out = nullptr;
    auto handle = std::make_unique<gphs_dataset>();
    handle->data = gphs::read_dataset(path);
    *out = handle.release();
    return GPHS_OK;
  });
}

gphs_status gphs_dataset_write(const gphs_dataset* ds, const char* path, int binary) {
  return guarded([&]() -> gphs_status {
    if (ds == nullptr || path == nullptr) throw gphs::InputError("null argument");
    if (binary != 0)
      gphs::write_dataset_binary(ds->data, path);
    else
      gphs::write_dataset_text(ds->data, path);
    return GPHS_OK;
  });
}

int32_t gphs_dataset_dim(const gphs_dataset* ds) { return ds == nullptr ? 0 : ds->data.dim(); }

int64_t gphs_dataset_size(const gphs_dataset* ds) { return ds == nullptr ? 0 : ds->data.size(); }

void gphs_dataset_free(gphs_dataset* ds) { delete ds; }

gphs_status gphs_run_learner(const char* config_json, char** report_json) {
  return run_report(config_json, report_json, &gphs::run_learner);
}

gphs_status gphs_run_baseline_l2(const char* config_json, char** report_json) {
  return run_report(config_json, report_json, &gphs::baseline_l2);
}

gphs_status gphs_run_brute_force(const char* config_json, char** report_json) {
  return run_report(config_json, report_json, &gphs::brute_force_proper);
}

gphs_status gphs_run_verify(const char* suites_csv, int threads, char** report_json) {
  return guarded([&]() -> gphs_status {
    if (report_json == nullptr) throw gphs::InputError("report output pointer is null");
    *report_json = nullptr;
    std::vector<std::string> names;
    if (suites_csv != nullptr) {
      std::stringstream ss(suites_csv);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) names.push_back(item);
    }
    nlohmann::json report = gphs::run_suites(names, threads);
    *report_json = dup_string(report.dump(2));
    if (!report["pass"].get<bool>())
      return fail(GPHS_GUARANTEE_FAILED, "one or more verification checks failed");
    return GPHS_OK;
  });
}

}  // extern "C"
