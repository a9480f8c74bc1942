#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace urn {

enum class Errc {
  SelfLoop,
  DuplicateEdge,
  Disconnected,
  EmptyVertexSet,
  VertexOutOfRange,
  TooSmall,
  ConnectivityRetryExhausted,
  NonpositiveTotalWeight,
  OpinionOutOfRange,
  MismatchedStates,
  DimensionMismatch,
  NonConvergence,
  NotSymmetric,
  ZeroEigenvalueNotSimple,
  DomainError,
  MissingStepRecords,
  InsufficientData,
  NonpositiveValues,
  TrajectoryMismatch,
  InvalidConfig,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above plus a
/// message naming the offending element.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace urn
