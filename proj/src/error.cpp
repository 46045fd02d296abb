#include "qnm/error.hpp"

namespace qnm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GapOrOverlap: return "GapOrOverlap";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::BadPointMass: return "BadPointMass";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::OmegaZero: return "OmegaZero";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::NonIntegerWindingNumber: return "NonIntegerWindingNumber";
    case ErrorKind::DegenerateRoot: return "DegenerateRoot";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::NotAnEigenfrequency: return "NotAnEigenfrequency";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::UnnormalizedMode: return "UnnormalizedMode";
    case ErrorKind::TestFunctionLeaksOutsideInterval: return "TestFunctionLeaksOutsideInterval";
    case ErrorKind::UnstableParameters: return "UnstableParameters";
    case ErrorKind::MassOffGrid: return "MassOffGrid";
    case ErrorKind::BoundaryOffGrid: return "BoundaryOffGrid";
    case ErrorKind::ModeSetNotConjugateClosed: return "ModeSetNotConjugateClosed";
    case ErrorKind::InvalidPerturbation: return "InvalidPerturbation";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::RootLeftRectangle: return "RootLeftRectangle";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GapOrOverlap:
    case ErrorKind::NonPositiveDensity:
    case ErrorKind::BadPointMass:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidState:
    case ErrorKind::InvalidPerturbation:
    case ErrorKind::UnsupportedFamily:
    case ErrorKind::InvalidConfig:
    case ErrorKind::GridMismatch:
    case ErrorKind::MassOffGrid:
    case ErrorKind::BoundaryOffGrid:
    case ErrorKind::UnstableParameters:
    case ErrorKind::TestFunctionLeaksOutsideInterval:
      return 2;
    default:
      return 3;
  }
}

}  // namespace qnm
