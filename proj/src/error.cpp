#include "gammaflow/error.hpp"

namespace gammaflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::NoLowerBound: return "NoLowerBound";
    case ErrorCode::BadRadii: return "BadRadii";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::TooLargeForSpectral: return "TooLargeForSpectral";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::DisconnectedDomain: return "DisconnectedDomain";
    case ErrorCode::VertexOutsideDomain: return "VertexOutsideDomain";
    case ErrorCode::InconclusiveTail: return "InconclusiveTail";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace gammaflow
