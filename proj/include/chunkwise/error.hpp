#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chunkwise {

enum class ErrorKind {
  InvalidPosition,
  SortMismatch,
  UnboundVariable,
  Parse,
  DuplicateAxiom,
  DuplicateTheory,
  UndeclaredAxiom,
  UnusedConditionVariable,
  UnknownTheory,
  ConditionViolated,
  BadValuation,
  AxiomNotInTheory,
  RedexMismatch,
  NotAnArithRedex,
  EndpointMismatch,
  NotGround,
  UnknownChunk,
  FilterIdUnresolved,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// 1-based location of a token in the original input.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, SourceSpan span, const std::string& message);

  const SourceSpan& span() const { return span_; }
  /// Message without the "line:col:" prefix.
  const std::string& detail() const { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

/// A checker failure, annotated with the 0-based index of the failing step
/// (npos when the failure is not tied to a step, e.g. endpoint mismatch).
class ProofError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ProofError(ErrorKind kind, std::size_t step, const std::string& message)
      : Error(kind, message), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace chunkwise
