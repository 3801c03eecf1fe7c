#include "disco/valuation.hpp"

#include <cstdint>
#include <map>

namespace disco {
namespace {

// Noise copies enumerated jointly: one (world slot, noise) target per tuple
// position.
struct Factor {
  std::vector<std::pair<std::size_t, NoiseIndex>> targets;
  std::vector<std::pair<std::vector<ValueIndex>, Rational>> entries;
};

struct WorldPlan {
  const Intervention* intervention = nullptr;
  std::vector<VarIndex> variables;  // relevant variables in topological order
  std::vector<bool> relevant;
  Event checks;
};

WorldPlan plan_world(const DiscoModel& model, const Intervention& intervention, Event checks) {
  WorldPlan plan;
  plan.intervention = &intervention;
  plan.relevant.assign(model.num_variables(), false);
  std::vector<VarIndex> stack;
  for (const auto& [v, value] : checks) stack.push_back(v);
  while (!stack.empty()) {
    VarIndex v = stack.back();
    stack.pop_back();
    if (plan.relevant[v]) continue;
    plan.relevant[v] = true;
    if (intervention.forced(v)) continue;
    for (VarIndex p : model.parents(v)) stack.push_back(p);
  }
  for (VarIndex v : model.topological_order()) {
    if (plan.relevant[v]) plan.variables.push_back(v);
  }
  plan.checks = std::move(checks);
  return plan;
}

bool needs_noise(const DiscoModel& model, const WorldPlan& plan, NoiseIndex n) {
  VarIndex owner = model.owner_of(n);
  return plan.relevant[owner] && !plan.intervention->forced(owner);
}

class Enumerator {
 public:
  Enumerator(const DiscoModel& model, UnitIndex unit, std::vector<WorldPlan> plans, std::vector<Factor> factors)
      : model_(model), unit_(unit), plans_(std::move(plans)), factors_(std::move(factors)),
        noise_(plans_.size(), std::vector<ValueIndex>(model.num_noises(), 0)),
        assignment_(model.num_variables(), 0) {}

  Rational run() {
    Rational total(0);
    descend(0, Rational(1), total);
    return total;
  }

 private:
  void descend(std::size_t f, const Rational& mass, Rational& total) {
    if (f == factors_.size()) {
      if (satisfied()) total += mass;
      return;
    }
    for (const auto& [values, m] : factors_[f].entries) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& [slot, noise] = factors_[f].targets[i];
        noise_[slot][noise] = values[i];
      }
      descend(f + 1, mass * m, total);
    }
  }

  bool satisfied() {
    for (std::size_t slot = 0; slot < plans_.size(); ++slot) {
      const WorldPlan& plan = plans_[slot];
      for (VarIndex v : plan.variables) {
        if (auto forced = plan.intervention->forced(v)) {
          assignment_[v] = *forced;
        } else {
          assignment_[v] = model_.function(v).evaluate(unit_, assignment_, noise_[slot][model_.noise_of(v)]);
        }
      }
      for (const auto& [v, value] : plan.checks) {
        if (assignment_[v] != value) return false;
      }
    }
    return true;
  }

  const DiscoModel& model_;
  UnitIndex unit_;
  std::vector<WorldPlan> plans_;
  std::vector<Factor> factors_;
  std::vector<std::vector<ValueIndex>> noise_;
  std::vector<ValueIndex> assignment_;
};

void check_unit(const DiscoModel& model, UnitIndex unit) {
  if (unit >= model.num_units()) {
    throw Error(ErrorKind::UnknownReference, "unit index " + std::to_string(unit) + " out of range");
  }
}

}  // namespace

Event make_single_world_event(const DiscoModel& model, std::span<const Binding> bindings) {
  Event event;
  for (const auto& b : bindings) {
    VarIndex v = model.require_variable(b.variable);
    event.emplace_back(v, model.require_value(v, b.value));
  }
  return event;
}

std::vector<ValueIndex> evaluate_unit_world(const DiscoModel& model, UnitIndex unit, const Intervention& intervention,
                                            std::span<const ValueIndex> noise_assignment) {
  check_unit(model, unit);
  std::vector<ValueIndex> assignment(model.num_variables(), 0);
  for (VarIndex v : model.topological_order()) {
    if (auto forced = intervention.forced(v)) {
      assignment[v] = *forced;
    } else {
      assignment[v] = model.function(v).evaluate(unit, assignment, noise_assignment[model.noise_of(v)]);
    }
  }
  return assignment;
}

Rational layer2(const DiscoModel& model, UnitIndex unit, const Intervention& intervention, const Event& event) {
  check_unit(model, unit);
  std::vector<WorldPlan> plans;
  plans.push_back(plan_world(model, intervention, event));
  std::vector<Factor> factors;
  for (NoiseIndex n = 0; n < model.num_noises(); ++n) {
    if (!needs_noise(model, plans[0], n)) continue;
    Factor f;
    f.targets = {{0, n}};
    const NoiseDef& noise = model.noise(n);
    for (std::size_t v = 0; v < noise.domain.size(); ++v) {
      if (noise.pmf[v] != 0) f.entries.push_back({{static_cast<ValueIndex>(v)}, noise.pmf[v]});
    }
    factors.push_back(std::move(f));
  }
  return Enumerator(model, unit, std::move(plans), std::move(factors)).run();
}

Rational layer1(const DiscoModel& model, UnitIndex unit, const Event& event) {
  static const Intervention factual;
  return layer2(model, unit, factual, event);
}

Rational layer3(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const CrossWorldEvent& event) {
  check_unit(model, unit);
  const auto worlds = coupling.worlds();
  std::vector<Event> per_world(worlds.size());
  for (const auto& c : event.constraints) {
    auto pos = coupling.position_of(c.world_id);
    if (!pos) {
      throw Error(ErrorKind::UncoveredWorld, "event references world " + std::to_string(c.world_id) +
                                                 " which the coupling does not cover");
    }
    if (c.variable >= model.num_variables() || c.value >= model.variable(c.variable).domain.size()) {
      throw Error(ErrorKind::OutOfDomainValue, "event constraint outside the model");
    }
    per_world[*pos].emplace_back(c.variable, c.value);
  }

  // Worlds without constraints marginalize out entirely.
  std::vector<std::size_t> slot_of(worlds.size(), SIZE_MAX);
  std::vector<WorldPlan> plans;
  for (std::size_t pos = 0; pos < worlds.size(); ++pos) {
    if (per_world[pos].empty()) continue;
    slot_of[pos] = plans.size();
    plans.push_back(plan_world(model, worlds[pos].intervention, std::move(per_world[pos])));
  }

  std::vector<Factor> factors;
  for (NoiseIndex n = 0; n < model.num_noises(); ++n) {
    for (const auto& block : coupling.blocks(n)) {
      std::vector<std::size_t> keep;  // indices into block.worlds
      Factor f;
      for (std::size_t i = 0; i < block.worlds.size(); ++i) {
        std::size_t slot = slot_of[block.worlds[i]];
        if (slot != SIZE_MAX && needs_noise(model, plans[slot], n)) {
          keep.push_back(i);
          f.targets.emplace_back(slot, n);
        }
      }
      if (keep.empty()) continue;
      std::map<std::vector<ValueIndex>, Rational> projected;
      for (const auto& e : block.entries) {
        std::vector<ValueIndex> key;
        key.reserve(keep.size());
        for (auto i : keep) key.push_back(e.values[i]);
        projected[key] += e.mass;
      }
      for (auto& [key, mass] : projected) f.entries.emplace_back(key, mass);
      factors.push_back(std::move(f));
    }
  }
  return Enumerator(model, unit, std::move(plans), std::move(factors)).run();
}

Rational conditional(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const CrossWorldEvent& target,
                     const CrossWorldEvent& evidence) {
  Rational denominator = layer3(model, unit, coupling, evidence);
  if (denominator == 0) {
    throw Error(ErrorKind::ZeroProbabilityEvidence,
                "evidence has probability zero for unit '" + model.unit_name(unit) + "'");
  }
  return layer3(model, unit, coupling, target.conjoin(evidence)) / denominator;
}

LayerAgreement check_layer_agreement(const DiscoModel& model, UnitIndex unit, const Intervention& x, const Event& y,
                                     const Event& evidence) {
  check_unit(model, unit);
  for (const auto& [v, value] : x.assignments()) {
    for (VarIndex a = 0; a < model.num_variables(); ++a) {
      if (a != v && is_ancestor(model, a, v) && !x.forced(a)) {
        throw Error(ErrorKind::ConfoundedTreatment, "'" + model.variable(a).name + "' is an ancestor of '" +
                                                        model.variable(v).name + "' but is not intervened on");
      }
    }
  }

  LayerAgreement out;
  const std::size_t d_id = 0;
  const std::size_t x_id = 1;
  Coupling coupling = make_coupling(model, CouplingKind::Independent, {factual_world(d_id), World{x_id, x}});
  CrossWorldEvent target;
  for (const auto& [v, value] : y) target.add(x_id, v, value);
  CrossWorldEvent given;
  for (const auto& [v, value] : evidence) given.add(d_id, v, value);
  out.counterfactual_given_evidence = conditional(model, unit, coupling, target, given);

  out.interventional = layer2(model, unit, x, y);

  Event x_event(x.assignments().begin(), x.assignments().end());
  Rational p_x = layer1(model, unit, x_event);
  if (p_x == 0) {
    throw Error(ErrorKind::ZeroProbabilityConditioningSet,
                "the conditioning set has probability zero for unit '" + model.unit_name(unit) + "'");
  }
  Event joint = x_event;
  joint.insert(joint.end(), y.begin(), y.end());
  out.observational_conditional = layer1(model, unit, joint) / p_x;
  return out;
}

Posterior abduct(const DiscoModel& model, const Event& evidence) {
  Posterior post;
  Rational total(0);
  for (UnitIndex u = 0; u < model.num_units(); ++u) {
    Rational w = model.unit_weight(u) == 0 ? Rational(0) : model.unit_weight(u) * layer1(model, u, evidence);
    total += w;
    post.weights.push_back(std::move(w));
  }
  if (total == 0) throw Error(ErrorKind::ZeroProbabilityEvidence, "evidence has probability zero under the unit prior");
  for (auto& w : post.weights) w /= total;
  return post;
}

Rational population_query(const DiscoModel& model, const Event& evidence, const Intervention& intervention,
                          const Event& event) {
  Posterior post = abduct(model, evidence);
  Rational total(0);
  for (UnitIndex u = 0; u < model.num_units(); ++u) {
    if (post.weights[u] != 0) total += post.weights[u] * layer2(model, u, intervention, event);
  }
  return total;
}

}  // namespace disco
