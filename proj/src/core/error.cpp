#include "certifem/error.hpp"

namespace certifem {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::NonConforming: return "NonConforming";
    case ErrorCode::InvertedElement: return "InvertedElement";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::NotInscribed: return "NotInscribed";
    case ErrorCode::StrategyInapplicable: return "StrategyInapplicable";
    case ErrorCode::MissingNormMetadata: return "MissingNormMetadata";
    case ErrorCode::NotNonBlunt: return "NotNonBlunt";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::ConstraintRankDeficiency: return "ConstraintRankDeficiency";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::InvalidSourceTerm: return "InvalidSourceTerm";
  }
  return "Unknown";
}

}  // namespace certifem
