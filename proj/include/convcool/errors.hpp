#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace convcool {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-fatal diagnostics (e.g. a velocity that is not discretely
/// divergence-free) go through this hook. Default prints to stderr.
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

}  // namespace convcool
