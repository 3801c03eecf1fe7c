#include "disco/worlds.hpp"

#include <algorithm>
#include <set>

namespace disco {
namespace {

// All tuples of the product of independent blocks, in lexicographic order of
// the world positions.
void expand_blocks(std::span<const NoiseBlock> blocks, std::size_t world_count, std::size_t block,
                   std::vector<ValueIndex>& tuple, const Rational& mass, std::map<std::vector<ValueIndex>, Rational>& out) {
  if (block == blocks.size()) {
    out[tuple] += mass;
    return;
  }
  for (const auto& entry : blocks[block].entries) {
    for (std::size_t i = 0; i < blocks[block].worlds.size(); ++i) tuple[blocks[block].worlds[i]] = entry.values[i];
    expand_blocks(blocks, world_count, block + 1, tuple, mass * entry.mass, out);
  }
}

NoiseBlock independent_block(const NoiseDef& noise, std::size_t position) {
  NoiseBlock block;
  block.worlds = {position};
  for (std::size_t v = 0; v < noise.domain.size(); ++v) {
    if (noise.pmf[v] != 0) block.entries.push_back({{static_cast<ValueIndex>(v)}, noise.pmf[v]});
  }
  return block;
}

}  // namespace

std::optional<ValueIndex> Intervention::forced(VarIndex v) const {
  for (const auto& [var, value] : assignments_) {
    if (var == v) return value;
  }
  return std::nullopt;
}

Intervention make_intervention(const DiscoModel& model, std::span<const Binding> bindings) {
  Intervention intervention;
  for (const auto& b : bindings) {
    VarIndex v = model.require_variable(b.variable);
    ValueIndex value = model.require_value(v, b.value);
    if (intervention.forced(v)) {
      throw Error(ErrorKind::DuplicateName, "variable '" + b.variable + "' is assigned twice in one intervention");
    }
    intervention.assignments_.emplace_back(v, value);
  }
  std::sort(intervention.assignments_.begin(), intervention.assignments_.end());
  return intervention;
}

Intervention make_intervention(const DiscoModel& model, std::vector<std::pair<VarIndex, ValueIndex>> assignments) {
  std::sort(assignments.begin(), assignments.end());
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const auto& [v, value] = assignments[i];
    if (v >= model.num_variables()) throw Error(ErrorKind::UnknownVariable, "variable index out of range");
    if (value >= model.variable(v).domain.size()) {
      throw Error(ErrorKind::OutOfDomainValue, "value index out of range for '" + model.variable(v).name + "'");
    }
    if (i > 0 && assignments[i - 1].first == v) {
      throw Error(ErrorKind::DuplicateName,
                  "variable '" + model.variable(v).name + "' is assigned twice in one intervention");
    }
  }
  Intervention intervention;
  intervention.assignments_ = std::move(assignments);
  return intervention;
}

World make_world(const DiscoModel& model, std::span<const Binding> bindings, std::size_t id) {
  return World{id, make_intervention(model, bindings)};
}

std::string_view coupling_kind_name(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::Independent: return "independent";
    case CouplingKind::Shared: return "shared";
    case CouplingKind::ExplicitJoint: return "explicit";
  }
  return "unknown";
}

std::optional<std::size_t> Coupling::position_of(std::size_t world_id) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (worlds_[i].id == world_id) return i;
  }
  return std::nullopt;
}

std::size_t Coupling::next_world_id() const {
  std::size_t id = 0;
  for (const auto& w : worlds_) id = std::max(id, w.id + 1);
  return id;
}

Coupling Coupling::with_independent_world(World world) const {
  if (position_of(world.id)) {
    throw Error(ErrorKind::DuplicateName, "world id " + std::to_string(world.id) + " is already used");
  }
  Coupling out = *this;
  const std::size_t position = out.worlds_.size();
  out.worlds_.push_back(std::move(world));
  for (auto& blocks : out.blocks_) {
    // The base pmf is the marginal of any existing block.
    NoiseBlock block;
    block.worlds = {position};
    std::map<ValueIndex, Rational> marginal;
    for (const auto& e : blocks.front().entries) marginal[e.values.front()] += e.mass;
    for (const auto& [value, mass] : marginal) block.entries.push_back({{value}, mass});
    blocks.push_back(std::move(block));
  }
  return out;
}

Coupling assemble_coupling(const DiscoModel& model, CouplingKind kind, std::vector<World> worlds,
                           const JointSpec& joint) {
  std::set<std::size_t> ids;
  for (const auto& w : worlds) {
    if (!ids.insert(w.id).second) {
      throw Error(ErrorKind::DuplicateName, "world id " + std::to_string(w.id) + " appears twice in one coupling");
    }
  }
  if (worlds.empty()) throw Error(ErrorKind::UncoveredWorld, "a coupling needs at least one world");
  if (kind != CouplingKind::ExplicitJoint && !joint.empty()) {
    throw Error(ErrorKind::TypeMismatch, "joint tables are only accepted for explicit couplings");
  }
  for (const auto& [name, table] : joint) {
    if (!model.find_noise(name)) throw Error(ErrorKind::UnknownReference, "joint table for unknown noise '" + name + "'");
  }

  Coupling c;
  c.kind_ = kind;
  c.worlds_ = std::move(worlds);
  c.blocks_.resize(model.num_noises());

  for (NoiseIndex n = 0; n < model.num_noises(); ++n) {
    const NoiseDef& noise = model.noise(n);
    auto& blocks = c.blocks_[n];

    if (kind == CouplingKind::Shared) {
      NoiseBlock block;
      for (std::size_t i = 0; i < c.worlds_.size(); ++i) block.worlds.push_back(i);
      for (std::size_t v = 0; v < noise.domain.size(); ++v) {
        if (noise.pmf[v] == 0) continue;
        block.entries.push_back({std::vector<ValueIndex>(c.worlds_.size(), static_cast<ValueIndex>(v)), noise.pmf[v]});
      }
      blocks.push_back(std::move(block));
      continue;
    }

    auto table = joint.find(noise.name);
    std::vector<bool> covered(c.worlds_.size(), false);
    if (table != joint.end()) {
      NoiseBlock block;
      if (table->second.world_ids.empty()) {
        for (std::size_t i = 0; i < c.worlds_.size(); ++i) block.worlds.push_back(i);
      } else {
        for (auto id : table->second.world_ids) {
          auto pos = c.position_of(id);
          if (!pos) {
            throw Error(ErrorKind::UncoveredWorld,
                        "joint table of '" + noise.name + "' references world " + std::to_string(id) + " outside the coupling");
          }
          if (covered[*pos]) {
            throw Error(ErrorKind::DuplicateName, "joint table of '" + noise.name + "' lists world " + std::to_string(id) + " twice");
          }
          covered[*pos] = true;
          block.worlds.push_back(*pos);
        }
      }
      for (auto pos : block.worlds) covered[pos] = true;

      std::set<std::vector<ValueIndex>> seen;
      for (const auto& [values, mass] : table->second.entries) {
        if (values.size() != block.worlds.size()) {
          throw Error(ErrorKind::OutOfDomainValue, "joint table of '" + noise.name + "' has a tuple of " +
                                                       std::to_string(values.size()) + " values for " +
                                                       std::to_string(block.worlds.size()) + " worlds");
        }
        std::vector<ValueIndex> tuple;
        for (const auto& v : values) {
          auto idx = find_value(noise.domain, v);
          if (!idx) {
            throw Error(ErrorKind::OutOfDomainValue,
                        "joint table of '" + noise.name + "' uses value '" + v.text() + "' outside its domain");
          }
          tuple.push_back(*idx);
        }
        if (mass < 0) throw Error(ErrorKind::ConflictingRow, "joint table of '" + noise.name + "' has a negative mass");
        if (!seen.insert(tuple).second) {
          throw Error(ErrorKind::ConflictingRow, "joint table of '" + noise.name + "' lists a tuple twice");
        }
        if (mass != 0) block.entries.push_back({std::move(tuple), mass});
      }
      blocks.push_back(std::move(block));
    }
    for (std::size_t i = 0; i < c.worlds_.size(); ++i) {
      if (!covered[i]) blocks.push_back(independent_block(noise, i));
    }
  }
  return c;
}

MarginalReport coupling_marginals_ok(const Coupling& coupling, const DiscoModel& model) {
  MarginalReport report;
  for (NoiseIndex n = 0; n < model.num_noises(); ++n) {
    const NoiseDef& noise = model.noise(n);
    for (const auto& block : coupling.blocks(n)) {
      for (std::size_t slot = 0; slot < block.worlds.size(); ++slot) {
        std::vector<Rational> marginal(noise.domain.size(), Rational(0));
        for (const auto& e : block.entries) marginal[e.values[slot]] += e.mass;
        for (std::size_t v = 0; v < noise.domain.size(); ++v) {
          if (marginal[v] != noise.pmf[v]) {
            report.ok = false;
            report.deviations.push_back(
                {coupling.worlds()[block.worlds[slot]].id, noise.name, noise.domain[v], noise.pmf[v], marginal[v]});
          }
        }
      }
    }
  }
  return report;
}

Coupling make_coupling(const DiscoModel& model, CouplingKind kind, std::vector<World> worlds, const JointSpec& joint) {
  Coupling c = assemble_coupling(model, kind, std::move(worlds), joint);
  MarginalReport report = coupling_marginals_ok(c, model);
  if (!report.ok) {
    const auto& d = report.deviations.front();
    throw Error(ErrorKind::MarginalMismatch,
                "marginal of noise '" + d.noise + "' in world " + std::to_string(d.world_id) + " gives value '" +
                    d.value.text() + "' mass " + to_fraction_string(d.actual) + ", base law has " +
                    to_fraction_string(d.expected) +
                    (report.deviations.size() > 1 ? " (" + std::to_string(report.deviations.size() - 1) + " more)" : ""));
  }
  return c;
}

std::vector<JointEntry> joint_table(const Coupling& coupling, const DiscoModel& model, NoiseIndex noise) {
  const std::size_t w = coupling.worlds().size();
  std::map<std::vector<ValueIndex>, Rational> masses;
  std::vector<ValueIndex> tuple(w, 0);
  expand_blocks(coupling.blocks(noise), w, 0, tuple, Rational(1), masses);

  // Emit every tuple of the product domain, zero-mass ones included.
  const std::size_t k = model.noise(noise).domain.size();
  std::vector<JointEntry> out;
  std::vector<ValueIndex> digits(w, 0);
  while (true) {
    auto it = masses.find(digits);
    out.push_back({digits, it == masses.end() ? Rational(0) : it->second});
    std::size_t i = w;
    while (i > 0) {
      --i;
      if (++digits[i] < k) break;
      digits[i] = 0;
      if (i == 0) return out;
    }
    if (w == 0) return out;
  }
}

CrossWorldEvent CrossWorldEvent::conjoin(const CrossWorldEvent& other) const {
  CrossWorldEvent out = *this;
  out.constraints.insert(out.constraints.end(), other.constraints.begin(), other.constraints.end());
  return out;
}

CrossWorldEvent make_event(const DiscoModel& model, std::size_t world_id, std::span<const Binding> bindings) {
  CrossWorldEvent event;
  for (const auto& b : bindings) {
    VarIndex v = model.require_variable(b.variable);
    event.add(world_id, v, model.require_value(v, b.value));
  }
  return event;
}

}  // namespace disco
