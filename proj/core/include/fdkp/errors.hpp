#pragma once

#include <stdexcept>
#include <string>

namespace fdkp {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid grid, missing representation, frame mismatch.
struct FieldError : Error {
  using Error::Error;
};

/// Non-finite symbol value on a retained mode, parameter out of range.
struct SymbolError : Error {
  using Error::Error;
};

/// Fixed-point non-contraction, Newton divergence, Krylov breakdown.
/// `diagnostics_json` carries the per-iteration record at the point of failure.
struct SolverError : Error {
  SolverError(const std::string& what, std::string diagnostics)
      : Error(what), diagnostics_json(std::move(diagnostics)) {}
  std::string diagnostics_json;
};

/// Config parse/validation failures; the message names the offending key.
struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace fdkp
