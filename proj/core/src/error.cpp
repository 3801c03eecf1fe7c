#include "disco/error.hpp"

namespace disco {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateName: return "duplicate-name";
    case ErrorKind::CyclicGraph: return "cyclic-graph";
    case ErrorKind::CycleDetected: return "cycle-detected";
    case ErrorKind::UnnormalizedPmf: return "unnormalized-pmf";
    case ErrorKind::PartialFunctionTable: return "partial-function-table";
    case ErrorKind::PrivacyConstraint: return "privacy-constraint";
    case ErrorKind::UnusedNoise: return "unused-noise";
    case ErrorKind::UnknownReference: return "unknown-reference";
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::InvalidWeight: return "invalid-weight";
    case ErrorKind::ConflictingRow: return "conflicting-row";
    case ErrorKind::UnknownVariable: return "unknown-variable";
    case ErrorKind::OutOfDomainValue: return "out-of-domain-value";
    case ErrorKind::MarginalMismatch: return "marginal-mismatch";
    case ErrorKind::UncoveredWorld: return "uncovered-world";
    case ErrorKind::ZeroProbabilityEvidence: return "zero-probability-evidence";
    case ErrorKind::ZeroProbabilityConditioningSet: return "zero-probability-conditioning-set";
    case ErrorKind::ConfoundedTreatment: return "confounded-treatment";
    case ErrorKind::NonBinaryVariable: return "non-binary-variable";
    case ErrorKind::UndefinedPn: return "undefined-pn";
    case ErrorKind::NotAMediator: return "not-a-mediator";
    case ErrorKind::InvalidRho: return "invalid-rho";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::SyntaxError: return "syntax-error";
    case ErrorKind::UnknownKey: return "unknown-key";
    case ErrorKind::TypeMismatch: return "type-mismatch";
    case ErrorKind::UnsupportedSchemaVersion: return "unsupported-schema-version";
    case ErrorKind::BadHeader: return "bad-header";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown-error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

}  // namespace disco
