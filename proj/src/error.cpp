#include "rank1horn/error.hpp"

namespace rank1horn {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::DuplicateEigenvalue: return "DuplicateEigenvalue";
    case ErrorCode::NonPositiveMultiplicity: return "NonPositiveMultiplicity";
    case ErrorCode::UnsupportedCase: return "UnsupportedCase";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DegenerateWeight: return "DegenerateWeight";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::NonRealResidue: return "NonRealResidue";
    case ErrorCode::NearConfluent: return "NearConfluent";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TolUnreached: return "TolUnreached";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool Error::is_numerical() const noexcept {
  switch (code_) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NonRealResidue:
    case ErrorCode::NearConfluent:
    case ErrorCode::EigensolverFailure:
    case ErrorCode::TolUnreached:
      return true;
    default:
      return false;
  }
}

}  // namespace rank1horn
