#include "disco/bounds.hpp"

#include <algorithm>

namespace disco {
namespace {

Intervention do_treatment(const DiscoModel& model, const BinaryQuery& q, ValueIndex value) {
  return make_intervention(model, {{q.treatment, value}});
}

Rational max_of(std::initializer_list<Rational> xs) { return std::max(xs); }
Rational min_of(std::initializer_list<Rational> xs) { return std::min(xs); }

}  // namespace

BinaryQuery make_binary_query(const DiscoModel& model, std::string_view treatment, const Value& t,
                              std::string_view outcome, const Value& y) {
  BinaryQuery q{};
  q.treatment = model.require_variable(treatment);
  q.outcome = model.require_variable(outcome);
  for (VarIndex v : {q.treatment, q.outcome}) {
    if (model.variable(v).domain.size() != 2) {
      throw Error(ErrorKind::NonBinaryVariable, "'" + model.variable(v).name + "' has " +
                                                    std::to_string(model.variable(v).domain.size()) +
                                                    " values, expected 2");
    }
  }
  if (q.treatment == q.outcome) {
    throw Error(ErrorKind::InvalidParameter, "treatment and outcome must be different variables");
  }
  q.t = model.require_value(q.treatment, t);
  q.t_prime = 1 - q.t;
  q.y = model.require_value(q.outcome, y);
  q.y_prime = 1 - q.y;
  return q;
}

CausalStats CausalStats::from_identifiable(const Rational& p_t, const Rational& a, const Rational& b) {
  CausalStats s;
  const Rational p_tp = 1 - p_t;
  s.p_t = p_t;
  s.p_y_do_t = a;
  s.p_y_do_tp = b;
  s.p_t_y = p_t * a;
  s.p_t_yp = p_t * (1 - a);
  s.p_tp_y = p_tp * b;
  s.p_tp_yp = p_tp * (1 - b);
  s.p_y = s.p_t_y + s.p_tp_y;
  return s;
}

CausalStats unit_stats(const DiscoModel& model, UnitIndex unit, const BinaryQuery& q) {
  if (!model.parents(q.treatment).empty()) {
    throw Error(ErrorKind::ConfoundedTreatment,
                "treatment '" + model.variable(q.treatment).name + "' has parents; its stats are not identifiable per unit");
  }
  Rational p_t = layer1(model, unit, {{q.treatment, q.t}});
  Rational a = layer2(model, unit, do_treatment(model, q, q.t), {{q.outcome, q.y}});
  Rational b = layer2(model, unit, do_treatment(model, q, q.t_prime), {{q.outcome, q.y}});
  return CausalStats::from_identifiable(p_t, a, b);
}

CausalStats population_stats(const DiscoModel& model, const BinaryQuery& q) {
  CausalStats total{};
  for (UnitIndex u = 0; u < model.num_units(); ++u) {
    const Rational& w = model.unit_weight(u);
    if (w == 0) continue;
    CausalStats s = unit_stats(model, u, q);
    total.p_t += w * s.p_t;
    total.p_y_do_t += w * s.p_y_do_t;
    total.p_y_do_tp += w * s.p_y_do_tp;
    total.p_y += w * s.p_y;
    total.p_t_y += w * s.p_t_y;
    total.p_tp_yp += w * s.p_tp_yp;
    total.p_t_yp += w * s.p_t_yp;
    total.p_tp_y += w * s.p_tp_y;
  }
  return total;
}

Interval pns_bounds(const CausalStats& s) {
  const Rational& a = s.p_y_do_t;
  const Rational& b = s.p_y_do_tp;
  return {max_of({Rational(0), a - b, s.p_y - b, a - s.p_y}),
          min_of({a, 1 - b, s.p_t_y + s.p_tp_yp, a - b + s.p_t_yp + s.p_tp_y})};
}

Interval pn_bounds(const CausalStats& s) {
  if (s.p_t_y == 0) throw Error(ErrorKind::UndefinedPn, "P(t, y) is zero, so PN is undefined");
  return {max_of({Rational(0), (s.p_y - s.p_y_do_tp) / s.p_t_y}),
          min_of({Rational(1), ((1 - s.p_y_do_tp) - s.p_tp_yp) / s.p_t_y})};
}

Rational pns_point_icn(const CausalStats& s) { return s.p_y_do_t * (1 - s.p_y_do_tp); }

PopulationBounds population_bounds(const CausalStats& s) { return {pns_bounds(s), pn_bounds(s)}; }

std::pair<std::size_t, std::size_t> treatment_worlds(const DiscoModel& model, const Coupling& coupling,
                                                     const BinaryQuery& q) {
  const Intervention want_t = do_treatment(model, q, q.t);
  const Intervention want_tp = do_treatment(model, q, q.t_prime);
  std::optional<std::size_t> wt, wtp;
  for (const World& w : coupling.worlds()) {
    if (!wt && w.intervention == want_t) wt = w.id;
    else if (!wtp && w.intervention == want_tp) wtp = w.id;
  }
  const std::string& name = model.variable(q.treatment).name;
  if (!wt || !wtp) {
    throw Error(ErrorKind::UncoveredWorld, "coupling must contain do(" + name + "=" +
                                               model.variable(q.treatment).domain[wt ? q.t_prime : q.t].text() +
                                               ")");
  }
  return {*wt, *wtp};
}

ResponseTypes response_types(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const BinaryQuery& q) {
  auto [wt, wtp] = treatment_worlds(model, coupling, q);
  auto cell = [&](ValueIndex yt, ValueIndex ytp) {
    CrossWorldEvent e;
    e.add(wt, q.outcome, yt).add(wtp, q.outcome, ytp);
    return layer3(model, unit, coupling, e);
  };
  return {cell(q.y, q.y_prime), cell(q.y, q.y), cell(q.y_prime, q.y_prime), cell(q.y_prime, q.y)};
}

PoCReport exact_poc(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const BinaryQuery& q) {
  PoCReport r;
  r.response = response_types(model, unit, coupling, q);
  r.pns = r.response.complier;

  auto [wt, wtp] = treatment_worlds(model, coupling, q);
  Coupling full = coupling;
  std::optional<std::size_t> d;
  for (const World& w : coupling.worlds()) {
    if (w.is_factual()) {
      d = w.id;
      break;
    }
  }
  if (!d) {
    d = coupling.next_world_id();
    full = coupling.with_independent_world(factual_world(*d));
  }

  CrossWorldEvent pn_target, pn_given;
  pn_target.add(wtp, q.outcome, q.y_prime);
  pn_given.add(*d, q.treatment, q.t).add(*d, q.outcome, q.y);
  r.pn = conditional(model, unit, full, pn_target, pn_given);

  CrossWorldEvent ps_target, ps_given;
  ps_target.add(wt, q.outcome, q.y);
  ps_given.add(*d, q.treatment, q.t_prime).add(*d, q.outcome, q.y_prime);
  r.ps = conditional(model, unit, full, ps_target, ps_given);
  return r;
}

Rational mediator_upper_from_conditionals(const MediatorInputs& in) {
  Rational total(0);
  for (std::size_t z = 0; z < in.p_z_do_t.size(); ++z) {
    if (!in.p_y_given_z_t[z]) continue;
    for (std::size_t zp = 0; zp < in.p_z_do_tp.size(); ++zp) {
      if (!in.p_yp_given_z_tp[zp]) continue;
      total += std::min(*in.p_y_given_z_t[z], *in.p_yp_given_z_tp[zp]) * std::min(in.p_z_do_t[z], in.p_z_do_tp[zp]);
    }
  }
  return total;
}

void require_mediator(const DiscoModel& model, const BinaryQuery& q, VarIndex z) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::NotAMediator, "'" + model.variable(z).name + "' is not a mediator: " + why);
  };
  const std::string& t_name = model.variable(q.treatment).name;
  if (z == q.treatment || z == q.outcome) fail("it is the treatment or the outcome");
  if (!model.parents(q.treatment).empty()) fail("treatment '" + t_name + "' has parents");
  auto pz = model.parents(z);
  if (pz.size() != 1 || pz[0] != q.treatment) fail("its only parent must be '" + t_name + "'");
  auto py = model.parents(q.outcome);
  bool has_z = false;
  for (VarIndex p : py) {
    if (p == z) has_z = true;
    else if (p != q.treatment) fail("outcome parent '" + model.variable(p).name + "' is neither treatment nor mediator");
  }
  if (!has_z) fail("it is not a parent of the outcome");
}

MediatorInputs mediator_inputs(const DiscoModel& model, UnitIndex unit, const BinaryQuery& q, VarIndex z) {
  require_mediator(model, q, z);
  const std::size_t k = model.variable(z).domain.size();
  MediatorInputs in;
  const Intervention do_t = do_treatment(model, q, q.t);
  const Intervention do_tp = do_treatment(model, q, q.t_prime);
  for (ValueIndex v = 0; v < k; ++v) {
    in.p_z_do_t.push_back(layer2(model, unit, do_t, {{z, v}}));
    in.p_z_do_tp.push_back(layer2(model, unit, do_tp, {{z, v}}));

    Rational den_t = layer1(model, unit, {{q.treatment, q.t}, {z, v}});
    in.p_y_given_z_t.push_back(den_t == 0 ? std::nullopt
                                          : std::optional<Rational>(
                                                layer1(model, unit, {{q.treatment, q.t}, {z, v}, {q.outcome, q.y}}) / den_t));
    Rational den_tp = layer1(model, unit, {{q.treatment, q.t_prime}, {z, v}});
    in.p_yp_given_z_tp.push_back(
        den_tp == 0 ? std::nullopt
                    : std::optional<Rational>(
                          layer1(model, unit, {{q.treatment, q.t_prime}, {z, v}, {q.outcome, q.y_prime}}) / den_tp));
  }
  return in;
}

MediatorReport mediator_pns_upper(const DiscoModel& model, UnitIndex unit, const BinaryQuery& q, VarIndex z) {
  MediatorReport r;
  r.mediator_upper = mediator_upper_from_conditionals(mediator_inputs(model, unit, q, z));
  r.generic_upper = pns_bounds(unit_stats(model, unit, q)).upper;
  r.combined_upper = std::min(r.mediator_upper, r.generic_upper);
  return r;
}

}  // namespace disco
