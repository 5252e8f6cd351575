#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fvddp {

// Exit-code families used by the CLI; library callers can switch on
// error_class() instead of catching individual types.
enum class ErrorKind { kValidation = 2, kNumeric = 3, kDegenerateMc = 4 };

class Error : public std::runtime_error {
 public:
  Error(std::string error_class, ErrorKind kind, const std::string& message)
      : std::runtime_error(error_class + ": " + message),
        class_(std::move(error_class)),
        kind_(kind) {}

  const std::string& error_class() const { return class_; }
  ErrorKind kind() const { return kind_; }

 private:
  std::string class_;
  ErrorKind kind_;
};

#define FVDDP_DEFINE_ERROR(NAME, KIND)                                   \
  struct NAME : Error {                                                  \
    explicit NAME(const std::string& message) : Error(#NAME, KIND, message) {} \
  }

FVDDP_DEFINE_ERROR(ValidationError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(AllZeroError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(NegativeWeightError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(EverythingPrunedError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(DuplicateLabelError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(DominationViolatedError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(NonpositiveThetaError, ErrorKind::kValidation);
FVDDP_DEFINE_ERROR(CancellationFailureError, ErrorKind::kNumeric);
FVDDP_DEFINE_ERROR(ExactInfeasibleError, ErrorKind::kNumeric);
FVDDP_DEFINE_ERROR(DegenerateBinsError, ErrorKind::kDegenerateMc);

#undef FVDDP_DEFINE_ERROR

}  // namespace fvddp
