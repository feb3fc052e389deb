#pragma once

#include <stdexcept>
#include <string>

namespace cz {

enum class Errc {
  NonUnit,
  InexactDivision,
  PrecisionExhausted,
  NotCoprime,
  SingularNodes,
  NotSquarefree,
  LeadingCoeffVanishes,
  PTooSmall,
  DegenerateCover,
  NotPrime,
  InvalidArgument,
  UnexpectedZeroDenominator,
  IntegralityViolation,
  PreconditionFailed,
  LiftAmbiguous,
  BoundViolated,
  NonIntegralCoefficient,
  TooLarge,
  Unsupported,
  Internal,
};

const char* errc_name(Errc e) noexcept;

// True for errors caused by the caller's input rather than by a failed
// internal consistency check.
bool errc_is_validation(Errc e) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

inline void check(bool cond, Errc code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace cz
