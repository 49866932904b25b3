#pragma once

#include <stdexcept>
#include <string>

namespace cubic {

enum class ErrorCode {
  RepeatedRoot,
  OrderViolation,
  OffCurve,
  EmptyComponent,
  DegenerateLine,
  CommonComponent,
  IllConditioned,
  NotTotallyReal,
  OutOfRange,
  JetFailure,
  NoQuadric,
  RankAmbiguous,
  WrongTorsionClass,
  VerificationFailed,
  Precondition,
  AtomCollision,
  AtomAtInfinity,
  CurveMismatch,
  RankNotStabilized,
  NotPositive,
  ComplexAtoms,
  NotFound,
  RetriesExhausted,
  InvalidInput,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cubic
