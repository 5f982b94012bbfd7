#include "ghostfd/error.hpp"

namespace ghostfd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NodeOnBoundary: return "NodeOnBoundary";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::ProjectionDiverged: return "ProjectionDiverged";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::NoAxisIntersection: return "NoAxisIntersection";
    case ErrorCode::InactiveMember: return "InactiveMember";
    case ErrorCode::CandidatesExhausted: return "CandidatesExhausted";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::MissingNeighbor: return "MissingNeighbor";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::UnknownDomain: return "UnknownDomain";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ghostfd
