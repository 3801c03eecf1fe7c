#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disco/error.hpp"
#include "disco/rational.hpp"
#include "disco/value.hpp"

namespace disco {

using VarIndex = std::size_t;
using NoiseIndex = std::size_t;
using UnitIndex = std::size_t;

/// Tolerance for accepting a pmf or unit prior whose entries were written as
/// rounded decimals. Accepted inputs are rescaled to sum to exactly one.
inline constexpr double kNormalizationTolerance = 1e-12;

/// Row key wildcard: a table row whose unit is "*" applies to every unit that
/// has no row of its own for the same (parents, noise) key.
inline constexpr std::string_view kAnyUnit = "*";

struct VariableDef {
  std::string name;
  std::vector<Value> domain;

  bool operator==(const VariableDef&) const = default;
};

struct NoiseDef {
  std::string name;
  std::vector<Value> domain;
  std::vector<Rational> pmf;

  bool operator==(const NoiseDef&) const = default;
};

struct UnitPrior {
  std::vector<std::string> units;
  std::vector<Rational> weights;

  bool operator==(const UnitPrior&) const = default;
};

struct TableRow {
  std::string unit;           // unit id or kAnyUnit
  std::vector<Value> parents;  // one value per parent, in FunctionSpec::parents order
  Value noise;
  Value value;
};

struct FunctionSpec {
  std::string target;
  std::vector<std::string> parents;
  std::string noise;
  std::vector<TableRow> rows;
};

/// Unvalidated model description, the input of build_model(). Produced by the
/// JSON reader or assembled in code.
struct ModelSpec {
  std::vector<std::string> units;
  std::vector<Rational> unit_weights;  // empty means uniform
  std::vector<NoiseDef> noises;
  std::vector<VariableDef> variables;
  std::vector<FunctionSpec> functions;
};

struct ValidationIssue {
  ErrorKind kind;
  std::string element;  // offending name, e.g. "Y", "E_Y.pmf", "units"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
};

/// f_i(pa_i, e_i; u) as a dense lookup table per unit.
class StructuralFn {
 public:
  StructuralFn() = default;
  StructuralFn(VarIndex target, std::vector<VarIndex> parents, NoiseIndex noise,
               std::vector<std::size_t> parent_radix, std::size_t noise_size,
               std::vector<std::vector<ValueIndex>> table);

  VarIndex target() const noexcept { return target_; }
  std::span<const VarIndex> parents() const noexcept { return parents_; }
  NoiseIndex noise() const noexcept { return noise_; }

  /// Output for `unit` given parent values (in parents() order) and a noise value.
  ValueIndex operator()(UnitIndex unit, std::span<const ValueIndex> parent_values,
                        ValueIndex noise_value) const;

  /// Output reading parent values out of a full endogenous assignment.
  ValueIndex evaluate(UnitIndex unit, std::span<const ValueIndex> assignment,
                      ValueIndex noise_value) const;

  std::size_t rows_per_unit() const noexcept { return rows_per_unit_; }
  std::span<const ValueIndex> unit_table(UnitIndex unit) const { return table_[unit]; }

  bool operator==(const StructuralFn&) const = default;

 private:
  VarIndex target_ = 0;
  std::vector<VarIndex> parents_;
  NoiseIndex noise_ = 0;
  std::vector<std::size_t> radix_;
  std::size_t noise_size_ = 1;
  std::size_t rows_per_unit_ = 0;
  std::vector<std::vector<ValueIndex>> table_;
};

/// The tuple <U, E, V, F>: validated and immutable once built.
class DiscoModel {
 public:
  const UnitPrior& prior() const noexcept { return prior_; }
  std::size_t num_units() const noexcept { return prior_.units.size(); }
  const std::string& unit_name(UnitIndex u) const { return prior_.units.at(u); }
  const Rational& unit_weight(UnitIndex u) const { return prior_.weights.at(u); }
  std::optional<UnitIndex> find_unit(std::string_view name) const;
  /// Throws Error(UnknownReference).
  UnitIndex require_unit(std::string_view name) const;

  std::size_t num_variables() const noexcept { return variables_.size(); }
  const VariableDef& variable(VarIndex v) const { return variables_.at(v); }
  std::span<const VariableDef> variables() const noexcept { return variables_; }
  std::optional<VarIndex> find_variable(std::string_view name) const;
  /// Throws Error(UnknownVariable).
  VarIndex require_variable(std::string_view name) const;
  /// Throws Error(OutOfDomainValue).
  ValueIndex require_value(VarIndex v, const Value& value) const;

  std::size_t num_noises() const noexcept { return noises_.size(); }
  const NoiseDef& noise(NoiseIndex n) const { return noises_.at(n); }
  std::span<const NoiseDef> noises() const noexcept { return noises_; }
  std::optional<NoiseIndex> find_noise(std::string_view name) const;
  NoiseIndex noise_of(VarIndex v) const { return functions_.at(v).noise(); }
  VarIndex owner_of(NoiseIndex n) const { return noise_owner_.at(n); }

  const StructuralFn& function(VarIndex v) const { return functions_.at(v); }
  std::span<const VarIndex> parents(VarIndex v) const { return functions_.at(v).parents(); }

  /// Every variable appears after all of its parents.
  std::span<const VarIndex> topological_order() const noexcept { return order_; }

  bool operator==(const DiscoModel&) const = default;

 private:
  friend DiscoModel build_model(const ModelSpec& spec);

  UnitPrior prior_;
  std::vector<NoiseDef> noises_;
  std::vector<VariableDef> variables_;
  std::vector<StructuralFn> functions_;  // indexed by target variable
  std::vector<VarIndex> noise_owner_;
  std::vector<VarIndex> order_;
};

/// Lists every violated invariant of `spec`; an empty report means
/// build_model() will succeed.
ValidationReport validate_model(const ModelSpec& spec);

/// Validates and builds. Throws Error carrying the kind of the first issue,
/// with every issue listed in the message.
DiscoModel build_model(const ModelSpec& spec);

/// Variable names ordered so that parents precede children. Throws
/// Error(CycleDetected) when the parent graph has a cycle and
/// Error(UnknownReference) for unresolved names.
std::vector<std::string> topological_order(const ModelSpec& spec);
std::vector<std::string> topological_order(const DiscoModel& model);

/// Serializes back to a description with one explicit row per unit, parent
/// combination and noise value. build_model(to_spec(m)) == m.
ModelSpec to_spec(const DiscoModel& model);

/// Parents-before-children check used by tests and validation.
bool respects_parent_order(const DiscoModel& model, std::span<const VarIndex> order);

/// True when v is an ancestor of (or equal to) target in the parent graph.
bool is_ancestor(const DiscoModel& model, VarIndex v, VarIndex target);

}  // namespace disco
