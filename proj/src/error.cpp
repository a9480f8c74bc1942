#include "urn/error.hpp"

namespace urn {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::Disconnected: return "Disconnected";
    case Errc::EmptyVertexSet: return "EmptyVertexSet";
    case Errc::VertexOutOfRange: return "VertexOutOfRange";
    case Errc::TooSmall: return "TooSmall";
    case Errc::ConnectivityRetryExhausted: return "ConnectivityRetryExhausted";
    case Errc::NonpositiveTotalWeight: return "NonpositiveTotalWeight";
    case Errc::OpinionOutOfRange: return "OpinionOutOfRange";
    case Errc::MismatchedStates: return "MismatchedStates";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::ZeroEigenvalueNotSimple: return "ZeroEigenvalueNotSimple";
    case Errc::DomainError: return "DomainError";
    case Errc::MissingStepRecords: return "MissingStepRecords";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NonpositiveValues: return "NonpositiveValues";
    case Errc::TrajectoryMismatch: return "TrajectoryMismatch";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace urn
