#include "rwdrift/error.hpp"

namespace rwdrift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositiveMass: return "NonPositiveMass";
    case ErrorCode::kMassNotOne: return "MassNotOne";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kRecurrentWalk: return "RecurrentWalk";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kFormulaMismatch: return "FormulaMismatch";
    case ErrorCode::kMemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kIncompatibleFunctional: return "IncompatibleFunctional";
    case ErrorCode::kMultiStartDisagreement: return "MultiStartDisagreement";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace rwdrift
