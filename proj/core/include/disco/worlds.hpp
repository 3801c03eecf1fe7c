#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "disco/model.hpp"

namespace disco {

/// A (variable name, value) pair as written by users: do(T=1), Y=0, ...
struct Binding {
  std::string variable;
  Value value;
};

/// do(x): sorted by variable, at most one assignment per variable. The empty
/// intervention denotes the factual world.
class Intervention {
 public:
  Intervention() = default;

  bool empty() const noexcept { return assignments_.empty(); }
  std::span<const std::pair<VarIndex, ValueIndex>> assignments() const noexcept { return assignments_; }
  std::optional<ValueIndex> forced(VarIndex v) const;

  bool operator==(const Intervention&) const = default;

 private:
  friend Intervention make_intervention(const DiscoModel&, std::span<const Binding>);
  friend Intervention make_intervention(const DiscoModel&, std::vector<std::pair<VarIndex, ValueIndex>>);
  std::vector<std::pair<VarIndex, ValueIndex>> assignments_;
};

/// Throws Error(UnknownVariable), Error(OutOfDomainValue), or
/// Error(DuplicateName) when a variable is assigned twice.
Intervention make_intervention(const DiscoModel& model, std::span<const Binding> bindings);
/// Same checks for already resolved indices.
Intervention make_intervention(const DiscoModel& model, std::vector<std::pair<VarIndex, ValueIndex>> assignments);

/// The submodel <U, E(x), V, F_x>. Two worlds with equal interventions are
/// still distinct and receive distinct noise copies.
struct World {
  std::size_t id = 0;
  Intervention intervention;

  bool is_factual() const noexcept { return intervention.empty(); }
};

World make_world(const DiscoModel& model, std::span<const Binding> bindings, std::size_t id = 0);
inline World factual_world(std::size_t id = 0) { return World{id, Intervention{}}; }

enum class CouplingKind { Independent, Shared, ExplicitJoint };

std::string_view coupling_kind_name(CouplingKind kind);

struct JointEntry {
  std::vector<ValueIndex> values;  // one noise value per world of the block
  Rational mass;
};

/// Joint law of one noise across a group of worlds. Blocks of the same noise
/// are mutually independent; worlds not listed in any block of a noise do not
/// exist (every world of a coupling appears in exactly one block per noise).
struct NoiseBlock {
  std::vector<std::size_t> worlds;  // positions in Coupling::worlds()
  std::vector<JointEntry> entries;  // zero-mass tuples are dropped
};

/// User-supplied joint table for one noise. `world_ids` lists the worlds the
/// tuples range over (empty = all worlds of the coupling, in order); the
/// remaining worlds receive independent copies of the noise.
struct JointTableSpec {
  std::vector<std::size_t> world_ids;
  std::vector<std::pair<std::vector<Value>, Rational>> entries;
};

/// Keyed by noise name. Noises without a table are coupled independently.
using JointSpec = std::map<std::string, JointTableSpec>;

/// P(e_x, ..., e_w): the joint law of the counterfactual noise copies, as a
/// product over noise variables of per-noise cross-world joints.
class Coupling {
 public:
  CouplingKind kind() const noexcept { return kind_; }
  std::span<const World> worlds() const noexcept { return worlds_; }
  std::optional<std::size_t> position_of(std::size_t world_id) const;
  std::span<const NoiseBlock> blocks(NoiseIndex noise) const { return blocks_.at(noise); }
  std::size_t num_noises() const noexcept { return blocks_.size(); }

  /// Adds `world` with noise copies independent of every existing world.
  /// Throws Error(DuplicateName) if its id is taken.
  Coupling with_independent_world(World world) const;

  /// Smallest id not used by any world.
  std::size_t next_world_id() const;

 private:
  friend Coupling assemble_coupling(const DiscoModel&, CouplingKind, std::vector<World>, const JointSpec&);

  CouplingKind kind_ = CouplingKind::Independent;
  std::vector<World> worlds_;
  std::vector<std::vector<NoiseBlock>> blocks_;  // per noise
};

/// Builds the coupling without checking marginals. Structural problems still
/// throw: duplicate world ids (DuplicateName), table tuples of the wrong arity
/// or with out-of-domain values (OutOfDomainValue), tables referencing unknown
/// worlds (UncoveredWorld) or unknown noises (UnknownReference), negative or
/// repeated entries (ConflictingRow), or a table passed with a non-explicit kind.
Coupling assemble_coupling(const DiscoModel& model, CouplingKind kind, std::vector<World> worlds,
                           const JointSpec& joint = {});

/// assemble_coupling() followed by the marginal check. Throws
/// Error(MarginalMismatch) naming the world, noise and value.
Coupling make_coupling(const DiscoModel& model, CouplingKind kind, std::vector<World> worlds,
                       const JointSpec& joint = {});

struct MarginalDeviation {
  std::size_t world_id;
  std::string noise;
  Value value;
  Rational expected;
  Rational actual;
};

struct MarginalReport {
  bool ok = true;
  std::vector<MarginalDeviation> deviations;
};

/// Every world's marginal must equal the base noise pmf exactly.
MarginalReport coupling_marginals_ok(const Coupling& coupling, const DiscoModel& model);

/// Full joint of one noise over all worlds of the coupling (product of its
/// blocks), including zero-mass tuples, in lexicographic tuple order.
std::vector<JointEntry> joint_table(const Coupling& coupling, const DiscoModel& model, NoiseIndex noise);

/// One constraint Y(x)=y of a cross-world event.
struct WorldConstraint {
  std::size_t world_id;
  VarIndex variable;
  ValueIndex value;
};

/// Conjunction Y(x)=y, ..., Z(w)=z.
struct CrossWorldEvent {
  std::vector<WorldConstraint> constraints;

  CrossWorldEvent& add(std::size_t world_id, VarIndex variable, ValueIndex value) {
    constraints.push_back({world_id, variable, value});
    return *this;
  }
  CrossWorldEvent conjoin(const CrossWorldEvent& other) const;
};

/// Resolves named bindings into constraints on `world_id`.
CrossWorldEvent make_event(const DiscoModel& model, std::size_t world_id, std::span<const Binding> bindings);

}  // namespace disco
