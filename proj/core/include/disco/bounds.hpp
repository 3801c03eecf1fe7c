#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "disco/valuation.hpp"

namespace disco {

/// Binary treatment T with values t, t' and binary outcome Y with y, y'.
struct BinaryQuery {
  VarIndex treatment;
  ValueIndex t;
  ValueIndex t_prime;
  VarIndex outcome;
  ValueIndex y;
  ValueIndex y_prime;
};

/// Resolves names; throws Error(NonBinaryVariable) unless both domains have
/// exactly two values.
BinaryQuery make_binary_query(const DiscoModel& model, std::string_view treatment, const Value& t,
                              std::string_view outcome, const Value& y);

struct Interval {
  Rational lower;
  Rational upper;

  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  bool operator==(const Interval&) const = default;
};

/// The eight inputs of the PNS/PN bounds.
struct CausalStats {
  Rational p_t;        // P(t)
  Rational p_y_do_t;   // P(y_t)
  Rational p_y_do_tp;  // P(y_{t'})
  Rational p_y;        // P(y)
  Rational p_t_y;      // P(t, y)
  Rational p_tp_yp;    // P(t', y')
  Rational p_t_yp;     // P(t, y')
  Rational p_tp_y;     // P(t', y)

  /// Joints as p_t * P(y_t) etc.; valid when T carries no confounding.
  static CausalStats from_identifiable(const Rational& p_t, const Rational& p_y_do_t, const Rational& p_y_do_tp);

  bool operator==(const CausalStats&) const = default;
};

/// Stats for one unit. Throws Error(ConfoundedTreatment) if T has parents.
CausalStats unit_stats(const DiscoModel& model, UnitIndex unit, const BinaryQuery& q);

/// Prior-weighted mixture of every unit's stats (fields are averaged, so the
/// joints are not products of the averaged marginals).
CausalStats population_stats(const DiscoModel& model, const BinaryQuery& q);

Interval pns_bounds(const CausalStats& s);

/// Throws Error(UndefinedPn) when P(t, y) = 0.
Interval pn_bounds(const CausalStats& s);

/// P(y_t) * P(y'_{t'}): PNS with independent counterfactual noises.
Rational pns_point_icn(const CausalStats& s);

struct PopulationBounds {
  Interval pns;
  Interval pn;
};

PopulationBounds population_bounds(const CausalStats& s);

/// Joint law of (Y(t), Y(t')) for binary Y.
struct ResponseTypes {
  Rational complier;       // Y(t)=y,  Y(t')=y'
  Rational always_taker;   // Y(t)=y,  Y(t')=y
  Rational never_taker;    // Y(t)=y', Y(t')=y'
  Rational defier;         // Y(t)=y', Y(t')=y
};

struct PoCReport {
  ResponseTypes response;
  Rational pns;
  Rational pn;  // P(y'_{t'} | t, y)
  Rational ps;  // P(y_t | t', y')
};

/// World ids of do(T=t) and do(T=t') inside `coupling` (first match each).
/// Throws Error(UncoveredWorld) if either is missing.
std::pair<std::size_t, std::size_t> treatment_worlds(const DiscoModel& model, const Coupling& coupling,
                                                     const BinaryQuery& q);

ResponseTypes response_types(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const BinaryQuery& q);

/// PNS, PN and PS by layer-3 enumeration. The factual world is appended with
/// independent noise when the coupling lacks one. Throws
/// Error(ZeroProbabilityEvidence) when P(t,y)=0 (PN) or P(t',y')=0 (PS).
PoCReport exact_poc(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const BinaryQuery& q);

/// Per-value inputs of the mediator bound. Conditionals are nullopt when the
/// conditioning event has probability zero; such summands count as 0.
struct MediatorInputs {
  std::vector<Rational> p_z_do_t;                    // P(Z_t = z)
  std::vector<Rational> p_z_do_tp;                   // P(Z_{t'} = z')
  std::vector<std::optional<Rational>> p_y_given_z_t;    // P(y | z, t)
  std::vector<std::optional<Rational>> p_yp_given_z_tp;  // P(y' | z', t')
};

Rational mediator_upper_from_conditionals(const MediatorInputs& in);

/// Checks the structure T -> Z -> Y with T a root, parents(Z) = {T} and
/// parents(Y) a subset of {T, Z} containing Z. Throws Error(NotAMediator).
void require_mediator(const DiscoModel& model, const BinaryQuery& q, VarIndex z);

MediatorInputs mediator_inputs(const DiscoModel& model, UnitIndex unit, const BinaryQuery& q, VarIndex z);

struct MediatorReport {
  Rational mediator_upper;
  Rational generic_upper;
  Rational combined_upper;  // min of the two
};

MediatorReport mediator_pns_upper(const DiscoModel& model, UnitIndex unit, const BinaryQuery& q, VarIndex z);

}  // namespace disco
