#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lindcorr {

enum class ErrorKind {
  InvalidArgument,
  NonRealResult,
  QuadraticNotSupported,
  SingularSteadyState,
  NonFiniteSolve,
  SingularAtK,
  Diverged,
  MissingRepresentation,
  NegativeRate,
  TooLarge,
  NotOneDimensional,
  SingularLeadingBlock,
  IrregularPencil,
  PoleOnUnitCircle,
  InsufficientData,
  GaplessInput,
  UnsupportedDimension,
  PhaseSingular,
  ParseError,
  UnknownFigure,
};

std::string_view error_kind_name(ErrorKind kind);

/// Library-wide exception. The kind names the failure mode so callers (and
/// the CLI's JSON error output) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace lindcorr
