#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsdde {

enum class Errc {
  // exprlang
  ParseError,
  UnknownIdentifier,
  ArityMismatch,
  UnboundVariable,
  DomainError,
  // model
  NonPositiveTau,
  VolatilityOrderViolation,
  DelayOutOfRange,
  DeltaDotBoundNotLessThanOne,
  DelayRateExceedsBound,
  NonDeterministicH,
  VariableNotAllowed,
  NonFiniteHistory,
  // scenario
  ZeroLevels,
  DegenerateGridRequest,
  IndexOutOfRange,
  InvalidParameter,
  // integrator
  LookbackBeforeHistory,
  AllPathsExploded,
  // sublinear
  EmptyEnsemble,
  GroupExploded,
  // stability
  NonPositiveP,
  NonPositiveParameter,
  // experiment
  SeriesTooShort,
  ConfigError,
  MissingKey,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Base exception for every failure raised by the library. The code is the
/// stable identifier; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& message)
      : Error(Errc::ParseError, message),
        offset_(offset),
        expected_(std::move(expected)) {}

  /// Byte offset into the source text.
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace gsdde
