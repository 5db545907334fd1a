#pragma once

#include <stdexcept>
#include <string>

namespace gronwall {

enum class ErrorKind {
  Schema,
  HypothesisViolated,
  NotIntegrable,
  NonIntegrable,
  UnsupportedDenseCombination,
  LocalFinitenessViolated,
  NumericalFailure,
};

const char* to_string(ErrorKind kind);

/// Every library failure carries a machine-readable kind; the CLI maps it to
/// an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gronwall
