#include "error.hpp"

namespace cz {

const char* errc_name(Errc e) noexcept {
  switch (e) {
    case Errc::NonUnit: return "NonUnit";
    case Errc::InexactDivision: return "InexactDivision";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::SingularNodes: return "SingularNodes";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::LeadingCoeffVanishes: return "LeadingCoeffVanishes";
    case Errc::PTooSmall: return "PTooSmall";
    case Errc::DegenerateCover: return "DegenerateCover";
    case Errc::NotPrime: return "NotPrime";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnexpectedZeroDenominator: return "UnexpectedZeroDenominator";
    case Errc::IntegralityViolation: return "IntegralityViolation";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::LiftAmbiguous: return "LiftAmbiguous";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::NonIntegralCoefficient: return "NonIntegralCoefficient";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Unsupported: return "Unsupported";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

bool errc_is_validation(Errc e) noexcept {
  switch (e) {
    case Errc::NotSquarefree:
    case Errc::LeadingCoeffVanishes:
    case Errc::PTooSmall:
    case Errc::DegenerateCover:
    case Errc::NotPrime:
    case Errc::InvalidArgument:
    case Errc::TooLarge:
    case Errc::Unsupported:
      return true;
    default:
      return false;
  }
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace cz
