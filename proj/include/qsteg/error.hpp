#pragma once

#include <stdexcept>
#include <string>

namespace qsteg {

enum class ErrorKind {
  kDimensionLimit,
  kShapeError,
  kNumericalError,
  kInvalidState,
  kBadParameter,
  kInvalidOrder,
  kNoFiniteValue,
  kSideStateMismatch,
  kSplitViolation,
  kInvalidCover,
  kDistillationInfeasible,
  kBoundVacuous,
  kInvalidSymplecticEigenvalue,
  kDivisibility,
  kConfig,
};

// Message text always starts with the canonical kind name, e.g. "shape error: ...".
const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qsteg
