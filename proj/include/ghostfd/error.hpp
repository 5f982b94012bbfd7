#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ghostfd {

enum class ErrorCode {
  NodeOnBoundary,
  EmptyInterior,
  ProjectionDiverged,
  ZeroGradient,
  NoAxisIntersection,
  InactiveMember,
  CandidatesExhausted,
  NotAdmissible,
  MissingNeighbor,
  SingularMatrix,
  SolveFailed,
  UnknownDomain,
  DegenerateFit,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can emit a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int node = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), node_(node) {}

  ErrorCode code() const noexcept { return code_; }
  /// Lattice node the failure refers to, or -1.
  int node() const noexcept { return node_; }

 private:
  ErrorCode code_;
  int node_;
};

}  // namespace ghostfd
