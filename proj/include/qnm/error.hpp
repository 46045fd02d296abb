#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnm {

enum class ErrorKind {
  // model
  GapOrOverlap,
  NonPositiveDensity,
  BadPointMass,
  ParseError,
  // spectrum
  OmegaZero,
  ContourThroughZero,
  NonIntegerWindingNumber,
  DegenerateRoot,
  NewtonDiverged,
  NotAnEigenfrequency,
  // biorthogonal
  GridMismatch,
  InvalidState,
  ZeroNorm,
  UnnormalizedMode,
  TestFunctionLeaksOutsideInterval,
  // dynamics
  UnstableParameters,
  MassOffGrid,
  BoundaryOffGrid,
  ModeSetNotConjugateClosed,
  // perturb
  InvalidPerturbation,
  UnsupportedFamily,
  DegeneratePair,
  RootLeftRectangle,
  // cli
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Exit code the CLI uses for an error of this kind: 2 for input validation,
/// 3 for numerical failure.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qnm
