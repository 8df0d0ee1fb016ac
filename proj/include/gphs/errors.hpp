#pragma once

#include <stdexcept>
#include <string>

namespace gphs {

/// Malformed configs, files, or out-of-contract arguments. Maps to exit code 4.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A configured budget (cover size, tuple count, iterations) was exhausted
/// before the operation could finish or certify. Maps to exit code 3.
/// Subclasses may carry the best incumbent found before the budget ran out.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gphs
