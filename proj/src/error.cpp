#include "lindcorr/error.hpp"

namespace lindcorr {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonRealResult: return "NonRealResult";
    case ErrorKind::QuadraticNotSupported: return "QuadraticNotSupported";
    case ErrorKind::SingularSteadyState: return "SingularSteadyState";
    case ErrorKind::NonFiniteSolve: return "NonFiniteSolve";
    case ErrorKind::SingularAtK: return "SingularAtK";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::MissingRepresentation: return "MissingRepresentation";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotOneDimensional: return "NotOneDimensional";
    case ErrorKind::SingularLeadingBlock: return "SingularLeadingBlock";
    case ErrorKind::IrregularPencil: return "IrregularPencil";
    case ErrorKind::PoleOnUnitCircle: return "PoleOnUnitCircle";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::GaplessInput: return "GaplessInput";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::PhaseSingular: return "PhaseSingular";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownFigure: return "UnknownFigure";
  }
  return "Unknown";
}

}  // namespace lindcorr
