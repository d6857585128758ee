#include "morsecone/errors.hpp"

namespace morsecone {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::NoFirstZero: return "NoFirstZero";
    case ErrorKind::NoNegativeEigenvalue: return "NoNegativeEigenvalue";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::BracketNotFound: return "BracketNotFound";
    case ErrorKind::CutoffInsufficient: return "CutoffInsufficient";
    case ErrorKind::QuadratureNonconvergence: return "QuadratureNonconvergence";
    case ErrorKind::NonFiniteMatrix: return "NonFiniteMatrix";
    case ErrorKind::SpectrumFormat: return "SpectrumFormat";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace morsecone
