#pragma once

#include <optional>
#include <vector>

#include "disco/bounds.hpp"

namespace disco {

/// Payoffs for selecting a complier, always-taker, never-taker and defier.
struct BenefitSpec {
  Rational beta;
  Rational gamma;
  Rational theta;
  Rational delta;

  Rational sigma() const { return beta - gamma - theta + delta; }
};

struct BenefitDecomposition {
  Rational w;      // part identifiable from P(y_t), P(y_{t'})
  Rational sigma;  // coefficient of PNS
};

BenefitDecomposition benefit_decompose(const CausalStats& s, const BenefitSpec& spec);

/// W + sigma * [PNS lower, PNS upper], endpoints swapped when sigma < 0.
Interval benefit_bounds(const CausalStats& s, const BenefitSpec& spec);

/// Payoff-weighted sum of the four response-type probabilities.
Rational benefit_from_response(const ResponseTypes& r, const BenefitSpec& spec);

struct BenefitReport {
  Rational w;
  Rational sigma;
  Interval pns_interval;
  Interval f_interval;
  std::optional<Rational> pns;  // set when a coupling was supplied
  std::optional<Rational> f;
};

/// Interval-only report from stats.
BenefitReport benefit_report(const CausalStats& s, const BenefitSpec& spec);

/// Interval report plus the exact value under `coupling`.
BenefitReport benefit_exact(const DiscoModel& model, UnitIndex unit, const Coupling& coupling, const BinaryQuery& q,
                            const BenefitSpec& spec);

struct RankedUnit {
  UnitIndex unit;
  BenefitReport report;
  Rational score;  // exact f when known, else the interval midpoint
};

/// Units ordered by descending score; ties keep model order.
std::vector<RankedUnit> rank_units(const DiscoModel& model, const BinaryQuery& q, const BenefitSpec& spec,
                                   const Coupling* coupling = nullptr);

}  // namespace disco
