#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gphs/cover.hpp"
#include "gphs/dataset.hpp"

namespace gphs {

/// One self-check; pass iff value <= tolerance.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

/// Runs one property suite: hermite, nuclear, poincare, ou, cover, or cellerm.
/// Throws InputError on an unknown name.
std::vector<CheckResult> run_suite(const std::string& name, int threads = 1);

/// Runs the named suites (all six when names is empty) and reports
/// {"pass": bool, "suites": {name: [checks]}}.
nlohmann::json run_suites(const std::vector<std::string>& names, int threads = 1);

/// Reference cell ERM: enumerates all 2^(2^K) truth tables, first-best on
/// ties. K <= 4.
CellErm exhaustive_boolean_erm(const std::vector<Halfspace>& parts, const LabeledDataset& data);

}  // namespace gphs
