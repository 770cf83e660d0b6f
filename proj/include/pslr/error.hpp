#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pslr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed Matrix Market input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// (I - H) is singular to working precision while forming the correction core.
class SingularCorrectionError : public Error {
 public:
  SingularCorrectionError()
      : Error("correction singular: E_rr has eigenvalue ~ 1") {}
};

/// CG met a direction with p^T A p <= 0.
class NotSpdError : public Error {
 public:
  using Error::Error;
};

/// A Krylov iteration produced NaN or Inf.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pslr
