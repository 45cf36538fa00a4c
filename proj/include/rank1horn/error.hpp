#pragma once

#include <stdexcept>
#include <string>

namespace rank1horn {

enum class ErrorCode {
  InvalidArgument,
  OrderViolation,
  DuplicateEigenvalue,
  NonPositiveMultiplicity,
  UnsupportedCase,
  NonPositiveParameter,
  ConvergenceFailure,
  DegenerateWeight,
  SupportViolation,
  NonRealResidue,
  NearConfluent,
  EigensolverFailure,
  EmptySample,
  TolUnreached,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

  // True for failures of the numerics rather than of the caller's input.
  bool is_numerical() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace rank1horn
