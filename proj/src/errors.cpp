#include "osmodes/errors.hpp"

namespace osm {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DerivativeVanishes: return "DerivativeVanishes";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::NearZeroDenominator: return "NearZeroDenominator";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::SeriesDiverging: return "SeriesDiverging";
    case ErrorCode::BranchFailure: return "BranchFailure";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ContractionNotCertified: return "ContractionNotCertified";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ModeConstructionFailed: return "ModeConstructionFailed";
    case ErrorCode::LeftHalfPlaneExit: return "LeftHalfPlaneExit";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::EigenSolveFailed: return "EigenSolveFailed";
    case ErrorCode::CrossingNotFound: return "CrossingNotFound";
  }
  return "Unknown";
}

}  // namespace osm
