#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rmab {

// Base class for all library errors. Each subclass names a failure class;
// the CLI maps the class name to a stable exit code and prints it as
// "error[<class>]: <message>".
class Error : public std::runtime_error {
 public:
  Error(std::string cls, const std::string& message)
      : std::runtime_error(message), cls_(std::move(cls)) {}

  const std::string& error_class() const noexcept { return cls_; }

 private:
  std::string cls_;
};

// Malformed or inconsistent configuration (scenario files, schedule specs).
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

// Model objects that violate their invariants (non-stochastic matrices,
// reducible chains, infeasible bound parameters).
struct ValidationError : Error {
  explicit ValidationError(const std::string& m) : Error("validation", m) {}
};

// API misuse: calls out of protocol order or with mismatched arguments.
struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error("usage", m) {}
};

// Filesystem and serialization failures.
struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io", m) {}
};

// Numeric failures: solver non-convergence, overflow beyond long double.
struct NumericError : Error {
  explicit NumericError(const std::string& m) : Error("numeric", m) {}
};

}  // namespace rmab
