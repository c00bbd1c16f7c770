#include "qsteg/error.hpp"

namespace qsteg {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionLimit: return "dimension limit";
    case ErrorKind::kShapeError: return "shape error";
    case ErrorKind::kNumericalError: return "numerical error";
    case ErrorKind::kInvalidState: return "invalid state";
    case ErrorKind::kBadParameter: return "bad parameter";
    case ErrorKind::kInvalidOrder: return "invalid order";
    case ErrorKind::kNoFiniteValue: return "no finite value";
    case ErrorKind::kSideStateMismatch: return "side-state mismatch";
    case ErrorKind::kSplitViolation: return "code does not satisfy QC_R split";
    case ErrorKind::kInvalidCover: return "invalid cover";
    case ErrorKind::kDistillationInfeasible:
      return "distillation infeasible at requested M̄";
    case ErrorKind::kBoundVacuous: return "bound vacuous";
    case ErrorKind::kInvalidSymplecticEigenvalue:
      return "invalid symplectic eigenvalue";
    case ErrorKind::kDivisibility: return "divisibility error";
    case ErrorKind::kConfig: return "config error";
  }
  return "error";
}

namespace {
std::string compose(ErrorKind kind, const std::string& detail) {
  std::string msg = kind_name(kind);
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(compose(kind, detail)), kind_(kind) {}

}  // namespace qsteg
