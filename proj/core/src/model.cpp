#include "disco/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace disco {
namespace {

std::string join_values(std::span<const Value> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += values[i].text();
  }
  return out;
}

// Sum check shared by noise pmfs and the unit prior.
bool within_normalization(const Rational& sum) {
  if (sum == 1) return true;
  return std::abs(to_double(sum) - 1.0) <= kNormalizationTolerance;
}

std::vector<Rational> normalized(const std::vector<Rational>& weights) {
  Rational sum = std::accumulate(weights.begin(), weights.end(), Rational(0));
  if (sum == 1) return weights;
  std::vector<Rational> out;
  out.reserve(weights.size());
  for (const auto& w : weights) out.push_back(w / sum);
  return out;
}

class Validator {
 public:
  explicit Validator(const ModelSpec& spec) : spec_(spec) {}

  ValidationReport run() {
    check_units();
    check_names();
    check_noises();
    check_variables();
    check_functions();
    check_acyclic();
    check_tables();
    return std::move(report_);
  }

 private:
  void add(ErrorKind kind, std::string element, std::string message) {
    report_.issues.push_back({kind, std::move(element), std::move(message)});
  }

  void check_domain(const std::string& owner, std::span<const Value> domain) {
    if (domain.empty()) {
      add(ErrorKind::EmptyDomain, owner, "domain of '" + owner + "' is empty");
      return;
    }
    std::set<std::string> seen;
    for (const auto& v : domain) {
      if (!seen.insert(v.text()).second) {
        add(ErrorKind::DuplicateName, owner + ".domain",
            "value '" + v.text() + "' appears twice in the domain of '" + owner + "'");
      }
    }
  }

  void check_units() {
    if (spec_.units.empty()) {
      add(ErrorKind::EmptyDomain, "units", "model declares no units");
    }
    std::set<std::string> seen;
    for (const auto& u : spec_.units) {
      if (u == kAnyUnit) {
        add(ErrorKind::DuplicateName, "units", "'*' is reserved and cannot name a unit");
      }
      if (!seen.insert(u).second) {
        add(ErrorKind::DuplicateName, u, "unit '" + u + "' declared twice");
      }
    }
    if (spec_.unit_weights.empty()) return;
    if (spec_.unit_weights.size() != spec_.units.size()) {
      add(ErrorKind::InvalidWeight, "units.weights",
          "expected " + std::to_string(spec_.units.size()) + " unit weights, got " +
              std::to_string(spec_.unit_weights.size()));
      return;
    }
    Rational sum = 0;
    for (std::size_t i = 0; i < spec_.unit_weights.size(); ++i) {
      if (spec_.unit_weights[i] < 0) {
        add(ErrorKind::InvalidWeight, spec_.units[i], "negative weight for unit '" + spec_.units[i] + "'");
      }
      sum += spec_.unit_weights[i];
    }
    if (!within_normalization(sum)) {
      add(ErrorKind::UnnormalizedPmf, "units.weights",
          "unit weights sum to " + format_probability(sum) + ", not 1");
    }
  }

  void check_names() {
    std::map<std::string, int> counts;
    for (const auto& n : spec_.noises) ++counts[n.name];
    for (const auto& v : spec_.variables) ++counts[v.name];
    for (const auto& [name, count] : counts) {
      if (count > 1) add(ErrorKind::DuplicateName, name, "name '" + name + "' declared " + std::to_string(count) + " times");
      if (name.empty()) add(ErrorKind::DuplicateName, name, "empty name");
    }
    for (const auto& n : spec_.noises) noise_index_.emplace(n.name, &n);
    for (const auto& v : spec_.variables) var_index_.emplace(v.name, &v);
  }

  void check_noises() {
    for (const auto& n : spec_.noises) {
      check_domain(n.name, n.domain);
      if (n.pmf.size() != n.domain.size()) {
        add(ErrorKind::UnnormalizedPmf, n.name + ".pmf",
            "pmf of '" + n.name + "' has " + std::to_string(n.pmf.size()) + " entries for a domain of " +
                std::to_string(n.domain.size()));
        continue;
      }
      Rational sum = 0;
      bool negative = false;
      for (const auto& p : n.pmf) {
        negative = negative || p < 0;
        sum += p;
      }
      if (negative) {
        add(ErrorKind::UnnormalizedPmf, n.name + ".pmf", "pmf of '" + n.name + "' has a negative entry");
      } else if (!within_normalization(sum)) {
        add(ErrorKind::UnnormalizedPmf, n.name + ".pmf",
            "pmf of '" + n.name + "' sums to " + format_probability(sum) + ", not 1");
      }
    }
  }

  void check_variables() {
    for (const auto& v : spec_.variables) check_domain(v.name, v.domain);
  }

  void check_functions() {
    std::map<std::string, int> per_target;
    std::map<std::string, std::vector<std::string>> noise_consumers;
    for (const auto& f : spec_.functions) {
      ++per_target[f.target];
      if (!var_index_.contains(f.target)) {
        add(ErrorKind::UnknownReference, f.target, "function target '" + f.target + "' is not a declared variable");
      }
      std::set<std::string> seen;
      for (const auto& p : f.parents) {
        if (!var_index_.contains(p)) {
          add(ErrorKind::UnknownReference, f.target, "parent '" + p + "' of '" + f.target + "' is not a declared variable");
        }
        if (!seen.insert(p).second) {
          add(ErrorKind::DuplicateName, f.target, "parent '" + p + "' listed twice for '" + f.target + "'");
        }
      }
      if (!noise_index_.contains(f.noise)) {
        add(ErrorKind::UnknownReference, f.target, "noise '" + f.noise + "' of '" + f.target + "' is not declared");
      } else {
        noise_consumers[f.noise].push_back(f.target);
      }
    }
    for (const auto& v : spec_.variables) {
      auto it = per_target.find(v.name);
      if (it == per_target.end()) {
        add(ErrorKind::PartialFunctionTable, v.name, "variable '" + v.name + "' has no structural function");
      } else if (it->second > 1) {
        add(ErrorKind::DuplicateName, v.name, "variable '" + v.name + "' has " + std::to_string(it->second) + " structural functions");
      }
    }
    for (const auto& n : spec_.noises) {
      auto it = noise_consumers.find(n.name);
      if (it == noise_consumers.end()) {
        add(ErrorKind::UnusedNoise, n.name, "noise '" + n.name + "' is not consumed by any function");
      } else if (it->second.size() > 1) {
        std::string users;
        for (const auto& t : it->second) users += (users.empty() ? "" : ", ") + t;
        add(ErrorKind::PrivacyConstraint, n.name, "noise '" + n.name + "' is shared by functions of " + users);
      }
    }
  }

  void check_acyclic() {
    try {
      topological_order(spec_);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::CycleDetected) {
        add(ErrorKind::CyclicGraph, "functions", e.what());
      }
      // Unknown references were already reported by check_functions().
    }
  }

  void check_tables() {
    // Tables are only meaningful once every reference resolved.
    for (const auto& issue : report_.issues) {
      if (issue.kind == ErrorKind::UnknownReference || issue.kind == ErrorKind::EmptyDomain ||
          issue.kind == ErrorKind::DuplicateName) {
        return;
      }
    }
    std::set<std::string> unit_set(spec_.units.begin(), spec_.units.end());
    for (const auto& f : spec_.functions) check_table(f, unit_set);
  }

  void check_table(const FunctionSpec& f, const std::set<std::string>& unit_set) {
    const VariableDef& target = *var_index_.at(f.target);
    const NoiseDef& noise = *noise_index_.at(f.noise);
    std::vector<const VariableDef*> parents;
    for (const auto& p : f.parents) parents.push_back(var_index_.at(p));

    // key: unit|parent values|noise value
    std::map<std::string, std::string> specific;
    std::map<std::string, std::string> wildcard;
    for (const auto& row : f.rows) {
      if (row.unit != kAnyUnit && !unit_set.contains(row.unit)) {
        add(ErrorKind::UnknownReference, f.target, "table of '" + f.target + "' references unknown unit '" + row.unit + "'");
        continue;
      }
      if (row.parents.size() != parents.size()) {
        add(ErrorKind::TypeMismatch, f.target,
            "row of '" + f.target + "' has " + std::to_string(row.parents.size()) + " parent values, expected " +
                std::to_string(parents.size()));
        continue;
      }
      bool in_domain = true;
      for (std::size_t i = 0; i < parents.size(); ++i) {
        if (!find_value(parents[i]->domain, row.parents[i])) {
          add(ErrorKind::OutOfDomainValue, f.target,
              "row of '" + f.target + "' uses value '" + row.parents[i].text() + "' outside the domain of '" +
                  parents[i]->name + "'");
          in_domain = false;
        }
      }
      if (!find_value(noise.domain, row.noise)) {
        add(ErrorKind::OutOfDomainValue, f.target,
            "row of '" + f.target + "' uses noise value '" + row.noise.text() + "' outside the domain of '" + noise.name + "'");
        in_domain = false;
      }
      if (!find_value(target.domain, row.value)) {
        add(ErrorKind::OutOfDomainValue, f.target,
            "row of '" + f.target + "' outputs '" + row.value.text() + "' outside the domain of '" + f.target + "'");
        in_domain = false;
      }
      if (!in_domain) continue;

      std::string key = join_values(row.parents) + "|" + row.noise.text();
      auto& bucket = row.unit == kAnyUnit ? wildcard : specific;
      std::string full_key = (row.unit == kAnyUnit ? std::string() : row.unit) + "|" + key;
      auto [it, inserted] = bucket.emplace(full_key, row.value.text());
      if (!inserted && it->second != row.value.text()) {
        add(ErrorKind::ConflictingRow, f.target,
            "table of '" + f.target + "' maps (" + (row.unit) + "; " + key + ") to both '" + it->second + "' and '" +
                row.value.text() + "'");
      }
    }

    // Totality: every unit x parent combination x noise value must be covered.
    std::size_t missing = 0;
    std::string first_missing;
    std::vector<std::size_t> digits(parents.size(), 0);
    for (const auto& unit : spec_.units) {
      std::fill(digits.begin(), digits.end(), 0);
      while (true) {
        std::vector<Value> combo;
        for (std::size_t i = 0; i < parents.size(); ++i) combo.push_back(parents[i]->domain[digits[i]]);
        for (const auto& e : noise.domain) {
          std::string key = join_values(combo) + "|" + e.text();
          if (!specific.contains(unit + "|" + key) && !wildcard.contains("|" + key)) {
            if (missing == 0) {
              first_missing = "(" + unit;
              for (std::size_t i = 0; i < parents.size(); ++i) {
                first_missing += ", " + parents[i]->name + "=" + combo[i].text();
              }
              first_missing += ", " + noise.name + "=" + e.text() + ")";
            }
            ++missing;
          }
        }
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == parents[k]->domain.size()) digits[k++] = 0;
        if (k == digits.size()) break;
      }
    }
    if (missing > 0) {
      add(ErrorKind::PartialFunctionTable, f.target,
          "table of '" + f.target + "' has no row for " + first_missing +
              (missing > 1 ? " and " + std::to_string(missing - 1) + " more" : ""));
    }
  }

  const ModelSpec& spec_;
  ValidationReport report_;
  std::unordered_map<std::string, const NoiseDef*> noise_index_;
  std::unordered_map<std::string, const VariableDef*> var_index_;
};

std::string describe(const ValidationReport& report) {
  std::ostringstream out;
  out << report.issues.size() << " model issue(s)";
  for (const auto& issue : report.issues) {
    out << "\n  [" << error_name(issue.kind) << "] " << issue.message;
  }
  return out.str();
}

}  // namespace

StructuralFn::StructuralFn(VarIndex target, std::vector<VarIndex> parents, NoiseIndex noise,
                           std::vector<std::size_t> parent_radix, std::size_t noise_size,
                           std::vector<std::vector<ValueIndex>> table)
    : target_(target),
      parents_(std::move(parents)),
      noise_(noise),
      radix_(std::move(parent_radix)),
      noise_size_(noise_size),
      table_(std::move(table)) {
  rows_per_unit_ = noise_size_;
  for (auto r : radix_) rows_per_unit_ *= r;
}

ValueIndex StructuralFn::operator()(UnitIndex unit, std::span<const ValueIndex> parent_values,
                                    ValueIndex noise_value) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < parents_.size(); ++i) index = index * radix_[i] + parent_values[i];
  return table_[unit][index * noise_size_ + noise_value];
}

ValueIndex StructuralFn::evaluate(UnitIndex unit, std::span<const ValueIndex> assignment,
                                  ValueIndex noise_value) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < parents_.size(); ++i) index = index * radix_[i] + assignment[parents_[i]];
  return table_[unit][index * noise_size_ + noise_value];
}

std::optional<UnitIndex> DiscoModel::find_unit(std::string_view name) const {
  for (std::size_t i = 0; i < prior_.units.size(); ++i) {
    if (prior_.units[i] == name) return i;
  }
  return std::nullopt;
}

UnitIndex DiscoModel::require_unit(std::string_view name) const {
  if (auto u = find_unit(name)) return *u;
  throw Error(ErrorKind::UnknownReference, "unknown unit '" + std::string(name) + "'");
}

std::optional<VarIndex> DiscoModel::find_variable(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

VarIndex DiscoModel::require_variable(std::string_view name) const {
  if (auto v = find_variable(name)) return *v;
  throw Error(ErrorKind::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

ValueIndex DiscoModel::require_value(VarIndex v, const Value& value) const {
  if (auto i = find_value(variables_.at(v).domain, value)) return *i;
  throw Error(ErrorKind::OutOfDomainValue,
              "value '" + value.text() + "' is not in the domain of '" + variables_.at(v).name + "'");
}

std::optional<NoiseIndex> DiscoModel::find_noise(std::string_view name) const {
  for (std::size_t i = 0; i < noises_.size(); ++i) {
    if (noises_[i].name == name) return i;
  }
  return std::nullopt;
}

ValidationReport validate_model(const ModelSpec& spec) { return Validator(spec).run(); }

std::vector<std::string> topological_order(const ModelSpec& spec) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < spec.variables.size(); ++i) index.emplace(spec.variables[i].name, i);

  const std::size_t n = spec.variables.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& f : spec.functions) {
    auto t = index.find(f.target);
    if (t == index.end()) {
      throw Error(ErrorKind::UnknownReference, "function target '" + f.target + "' is not a declared variable");
    }
    for (const auto& p : f.parents) {
      auto pi = index.find(p);
      if (pi == index.end()) {
        throw Error(ErrorKind::UnknownReference, "parent '" + p + "' of '" + f.target + "' is not a declared variable");
      }
      children[pi->second].push_back(t->second);
      ++indegree[t->second];
    }
  }

  // Kahn's algorithm, taking ready variables in declaration order.
  std::vector<std::string> order;
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  while (!ready.empty()) {
    std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(spec.variables[v].name);
    for (auto c : children[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  if (order.size() != n) {
    std::string stuck;
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] > 0) stuck += (stuck.empty() ? "" : ", ") + spec.variables[i].name;
    }
    throw Error(ErrorKind::CycleDetected, "parent graph has a cycle through " + stuck);
  }
  return order;
}

std::vector<std::string> topological_order(const DiscoModel& model) {
  std::vector<std::string> names;
  for (auto v : model.topological_order()) names.push_back(model.variable(v).name);
  return names;
}

DiscoModel build_model(const ModelSpec& spec) {
  ValidationReport report = validate_model(spec);
  if (!report.ok()) throw Error(report.issues.front().kind, describe(report));

  DiscoModel model;
  model.prior_.units = spec.units;
  if (spec.unit_weights.empty()) {
    model.prior_.weights.assign(spec.units.size(), Rational(1, static_cast<long>(spec.units.size())));
  } else {
    model.prior_.weights = normalized(spec.unit_weights);
  }
  model.variables_ = spec.variables;
  model.noises_ = spec.noises;
  for (auto& n : model.noises_) n.pmf = normalized(n.pmf);

  std::unordered_map<std::string, std::size_t> unit_index;
  for (std::size_t i = 0; i < spec.units.size(); ++i) unit_index.emplace(spec.units[i], i);

  model.functions_.resize(spec.variables.size());
  model.noise_owner_.resize(spec.noises.size());
  for (const auto& f : spec.functions) {
    VarIndex target = *model.find_variable(f.target);
    NoiseIndex noise = *model.find_noise(f.noise);
    model.noise_owner_[noise] = target;

    std::vector<VarIndex> parents;
    std::vector<std::size_t> radix;
    for (const auto& p : f.parents) {
      VarIndex pi = *model.find_variable(p);
      parents.push_back(pi);
      radix.push_back(model.variables_[pi].domain.size());
    }
    const auto& noise_domain = model.noises_[noise].domain;
    const auto& target_domain = model.variables_[target].domain;
    std::size_t rows = noise_domain.size();
    for (auto r : radix) rows *= r;

    constexpr ValueIndex kUnset = ~ValueIndex{0};
    std::vector<ValueIndex> fallback(rows, kUnset);
    std::vector<std::vector<ValueIndex>> table(spec.units.size(), std::vector<ValueIndex>(rows, kUnset));
    for (const auto& row : f.rows) {
      std::size_t index = 0;
      for (std::size_t i = 0; i < parents.size(); ++i) {
        index = index * radix[i] + *find_value(model.variables_[parents[i]].domain, row.parents[i]);
      }
      index = index * noise_domain.size() + *find_value(noise_domain, row.noise);
      ValueIndex out = *find_value(target_domain, row.value);
      if (row.unit == kAnyUnit) {
        fallback[index] = out;
      } else {
        table[unit_index.at(row.unit)][index] = out;
      }
    }
    for (auto& unit_table : table) {
      for (std::size_t i = 0; i < rows; ++i) {
        if (unit_table[i] == kUnset) unit_table[i] = fallback[i];
      }
    }
    model.functions_[target] =
        StructuralFn(target, std::move(parents), noise, std::move(radix), noise_domain.size(), std::move(table));
  }

  for (const auto& name : topological_order(spec)) model.order_.push_back(*model.find_variable(name));
  return model;
}

ModelSpec to_spec(const DiscoModel& model) {
  ModelSpec spec;
  spec.units = model.prior().units;
  spec.unit_weights = model.prior().weights;
  spec.noises.assign(model.noises().begin(), model.noises().end());
  spec.variables.assign(model.variables().begin(), model.variables().end());

  for (VarIndex v = 0; v < model.num_variables(); ++v) {
    const StructuralFn& fn = model.function(v);
    FunctionSpec f;
    f.target = model.variable(v).name;
    f.noise = model.noise(fn.noise()).name;
    for (auto p : fn.parents()) f.parents.push_back(model.variable(p).name);

    const auto& noise_domain = model.noise(fn.noise()).domain;
    for (UnitIndex u = 0; u < model.num_units(); ++u) {
      auto table = fn.unit_table(u);
      for (std::size_t index = 0; index < table.size(); ++index) {
        TableRow row;
        row.unit = model.unit_name(u);
        row.noise = noise_domain[index % noise_domain.size()];
        std::size_t rest = index / noise_domain.size();
        row.parents.resize(fn.parents().size());
        for (std::size_t i = fn.parents().size(); i-- > 0;) {
          const auto& dom = model.variable(fn.parents()[i]).domain;
          row.parents[i] = dom[rest % dom.size()];
          rest /= dom.size();
        }
        row.value = model.variable(v).domain[table[index]];
        f.rows.push_back(std::move(row));
      }
    }
    spec.functions.push_back(std::move(f));
  }
  return spec;
}

bool respects_parent_order(const DiscoModel& model, std::span<const VarIndex> order) {
  if (order.size() != model.num_variables()) return false;
  std::vector<std::size_t> position(model.num_variables(), model.num_variables());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= model.num_variables() || position[order[i]] != model.num_variables()) return false;
    position[order[i]] = i;
  }
  for (VarIndex v = 0; v < model.num_variables(); ++v) {
    for (auto p : model.parents(v)) {
      if (position[p] >= position[v]) return false;
    }
  }
  return true;
}

bool is_ancestor(const DiscoModel& model, VarIndex v, VarIndex target) {
  if (v == target) return true;
  std::vector<bool> seen(model.num_variables(), false);
  std::vector<VarIndex> stack{target};
  while (!stack.empty()) {
    VarIndex cur = stack.back();
    stack.pop_back();
    for (auto p : model.parents(cur)) {
      if (p == v) return true;
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

}  // namespace disco
