#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gammaflow {

enum class ErrorCode {
  EmptyInput,
  NonPositiveWeight,
  AsymmetricInput,
  DuplicateEdge,
  DuplicateVertex,
  Disconnected,
  UnknownVertex,
  InvalidSpec,
  ParseError,
  IsolatedVertex,
  NoLowerBound,
  BadRadii,
  NegativeTime,
  TooLargeForSpectral,
  StepSizeUnderflow,
  EmptyDomain,
  DisconnectedDomain,
  VertexOutsideDomain,
  InconclusiveTail,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; what() starts with the
// code name so that command-line diagnostics stay greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gammaflow
