#include "disco/selection.hpp"

#include <algorithm>

namespace disco {

BenefitDecomposition benefit_decompose(const CausalStats& s, const BenefitSpec& spec) {
  const Rational& a = s.p_y_do_t;
  const Rational& b = s.p_y_do_tp;
  return {(spec.gamma - spec.delta) * a + spec.delta * b + spec.theta * (1 - b), spec.sigma()};
}

Interval benefit_bounds(const CausalStats& s, const BenefitSpec& spec) {
  auto [w, sigma] = benefit_decompose(s, spec);
  Interval pns = pns_bounds(s);
  Rational lo = w + sigma * pns.lower;
  Rational hi = w + sigma * pns.upper;
  if (sigma < 0) std::swap(lo, hi);
  return {lo, hi};
}

Rational benefit_from_response(const ResponseTypes& r, const BenefitSpec& spec) {
  return spec.beta * r.complier + spec.gamma * r.always_taker + spec.theta * r.never_taker + spec.delta * r.defier;
}

BenefitReport benefit_report(const CausalStats& s, const BenefitSpec& spec) {
  BenefitReport r;
  auto d = benefit_decompose(s, spec);
  r.w = d.w;
  r.sigma = d.sigma;
  r.pns_interval = pns_bounds(s);
  r.f_interval = benefit_bounds(s, spec);
  return r;
}

BenefitReport benefit_exact(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const BinaryQuery& q,
                            const BenefitSpec& spec) {
  BenefitReport r = benefit_report(unit_stats(model, unit, q), spec);
  ResponseTypes types = response_types(model, unit, coupling, q);
  r.pns = types.complier;
  r.f = benefit_from_response(types, spec);
  return r;
}

std::vector<RankedUnit> rank_units(const DiscoModel& model, const BinaryQuery& q, const BenefitSpec& spec,
                                   const Coupling* coupling) {
  std::vector<RankedUnit> out;
  for (UnitIndex u = 0; u < model.num_units(); ++u) {
    RankedUnit r{u, coupling ? benefit_exact(model, u, *coupling, q, spec) : benefit_report(unit_stats(model, u, q), spec),
                 Rational(0)};
    r.score = r.report.f ? *r.report.f : (r.report.f_interval.lower + r.report.f_interval.upper) / 2;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedUnit& a, const RankedUnit& b) { return a.score > b.score; });
  return out;
}

}  // namespace disco
