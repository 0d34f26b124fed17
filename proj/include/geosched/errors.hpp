#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geosched {

/// Base for every error the library raises. `kind()` is the stable,
/// machine-readable category used in the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept = 0;
};

/// Invalid static configuration (site specs, curves, water parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "config"; }
};

/// Malformed input file. Carries the 1-based file line when known.
class IngestError : public Error {
 public:
  IngestError(const std::string& what, long line = 0)
      : Error(line > 0 ? what + " (row " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::string_view kind() const noexcept override { return "ingest"; }
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Caller violated an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "contract"; }
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "domain"; }
};

/// No placement satisfies the capacity constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "infeasible"; }
};

}  // namespace geosched
