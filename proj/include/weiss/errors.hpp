#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace weiss {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. Carries the byte offset of the offending token
/// and the set of tokens the parser would have accepted there.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvaluationError : public Error {
 public:
  enum class Reason { missing_symbol, non_positive_base, division_by_zero, log_domain, non_finite };

  EvaluationError(Reason reason, const std::string& message) : Error(message), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// D(phi) vanishes identically, so the pre-Schwarzian is undefined.
class DegenerateProducingFunction : public Error {
 public:
  using Error::Error;
};

/// The operator coefficients depend on the unknown function.
class NonlinearOperator : public Error {
 public:
  using Error::Error;
};

/// D(phi) is not of the form E * psi^m with E free of psi.
class PatternNotRecognized : public Error {
 public:
  using Error::Error;
};

class CoefficientArityMismatch : public Error {
 public:
  using Error::Error;
};

/// Guard rejection exhausted the sampling budget.
class DomainExhausted : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace weiss
