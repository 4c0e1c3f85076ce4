#pragma once

#include <stdexcept>
#include <string>

namespace osm {

enum class ErrorCode {
  Ok = 0,
  InvalidArgument,
  NoConvergence,
  DerivativeVanishes,
  Overflow,
  UnsupportedOrder,
  NearZeroDenominator,
  BranchAmbiguity,
  QuadratureFailure,
  SeriesDiverging,
  BranchFailure,
  HypothesisViolated,
  ContractionNotCertified,
  DegenerateDenominator,
  ModeConstructionFailed,
  LeftHalfPlaneExit,
  IllConditioned,
  EigenSolveFailed,
  CrossingNotFound,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace osm
