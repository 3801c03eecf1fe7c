#pragma once

#include <span>
#include <utility>
#include <vector>

#include "disco/worlds.hpp"

namespace disco {

/// Conjunction of variable=value constraints inside a single world.
using Event = std::vector<std::pair<VarIndex, ValueIndex>>;

/// Throws Error(UnknownVariable) or Error(OutOfDomainValue).
Event make_single_world_event(const DiscoModel& model, std::span<const Binding> bindings);

/// Recursive evaluation of F_x for one unit. `noise_assignment` holds one
/// value per noise of the model; intervened variables ignore theirs.
std::vector<ValueIndex> evaluate_unit_world(const DiscoModel& model, UnitIndex unit, const Intervention& intervention,
                                            std::span<const ValueIndex> noise_assignment);

/// P(event; u) in the factual world.
Rational layer1(const DiscoModel& model, UnitIndex unit, const Event& event);

/// P(event_x; u) under do(x).
Rational layer2(const DiscoModel& model, UnitIndex unit, const Intervention& intervention, const Event& event);

/// Joint probability of a cross-world event under `coupling`. Only noises
/// feeding event variables are enumerated. Throws Error(UncoveredWorld) if
/// the event names a world absent from the coupling.
Rational layer3(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const CrossWorldEvent& event);

/// layer3(target and evidence) / layer3(evidence). Throws
/// Error(ZeroProbabilityEvidence) when the evidence has probability zero.
Rational conditional(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const CrossWorldEvent& target,
                     const CrossWorldEvent& evidence);

/// The three quantities that must coincide for one unit: P(y_x | e), P(y_x)
/// and P(y | x), computed with d independent of do(x).
struct LayerAgreement {
  Rational counterfactual_given_evidence;
  Rational interventional;
  Rational observational_conditional;

  bool equal() const {
    return counterfactual_given_evidence == interventional && interventional == observational_conditional;
  }
};

/// Throws Error(ZeroProbabilityEvidence) for P(e;u)=0,
/// Error(ZeroProbabilityConditioningSet) for P(x;u)=0, and
/// Error(ConfoundedTreatment) unless every ancestor of an intervened variable
/// is itself intervened (otherwise P(y|x) and P(y_x) legitimately differ).
LayerAgreement check_layer_agreement(const DiscoModel& model, UnitIndex unit, const Intervention& x, const Event& y,
                                     const Event& evidence);

struct Posterior {
  std::vector<Rational> weights;  // one per unit, in model order
};

/// P(u | evidence). Throws Error(ZeroProbabilityEvidence).
Posterior abduct(const DiscoModel& model, const Event& evidence);

/// sum_u P(event_x; u) P(u | evidence).
Rational population_query(const DiscoModel& model, const Event& evidence, const Intervention& intervention,
                          const Event& event);

}  // namespace disco
