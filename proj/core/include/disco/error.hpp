#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace disco {

/// Stable machine-readable failure categories. The names returned by
/// error_name() are part of the CLI contract and must not change.
enum class ErrorKind {
  // model building
  DuplicateName,
  CyclicGraph,
  CycleDetected,
  UnnormalizedPmf,
  PartialFunctionTable,
  PrivacyConstraint,
  UnusedNoise,
  UnknownReference,
  EmptyDomain,
  InvalidWeight,
  ConflictingRow,
  // worlds and coupling
  UnknownVariable,
  OutOfDomainValue,
  MarginalMismatch,
  UncoveredWorld,
  // valuation
  ZeroProbabilityEvidence,
  ZeroProbabilityConditioningSet,
  ConfoundedTreatment,
  // causation bounds
  NonBinaryVariable,
  UndefinedPn,
  NotAMediator,
  // simulation
  InvalidRho,
  InvalidParameter,
  // parsing and io
  SyntaxError,
  UnknownKey,
  TypeMismatch,
  UnsupportedSchemaVersion,
  BadHeader,
  IoError,
};

std::string_view error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace disco
