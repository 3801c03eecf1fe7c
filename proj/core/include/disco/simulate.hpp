#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace disco {

enum class Regime { Shared, Correlated, Independent };

std::string_view regime_name(Regime r);
/// Throws Error(InvalidParameter) for anything but shared|correlated|independent.
Regime parse_regime(std::string_view text);

/// Joint law of the two counterfactual noise copies (E(0), E(1)). Each copy is
/// standard normal in every regime.
struct GaussianCouplingSpec {
  Regime regime = Regime::Independent;
  double rho = 0.5;                                       // correlated regime, pure-noise model
  std::map<int, double> rho_by_x1 = {{0, 0.2}, {1, 0.8}};  // correlated regime, covariate model
};

/// Throws Error(InvalidRho) for a rho outside [-1, 1] or a map that misses x1=0 or x1=1.
/// An empty map makes the covariate model use `rho` for both groups.
void check_coupling(const GaussianCouplingSpec& spec);

struct Example2Params {
  std::size_t n = 100000;
  double p_x0 = 0.5;
  double p_x1 = 0.5;
  std::vector<double> x2_domain = {0.0, 1.0, 2.0};
  double assignment_prob = 0.5;
  std::uint64_t seed = 0;
};

/// Throws Error(InvalidParameter).
void check_params(const Example2Params& p);

struct Covariates {
  int x0 = 0;
  int x1 = 0;
  double x2 = 0.0;
};

struct CrossWorldRow {
  std::uint64_t unit = 0;
  std::optional<Covariates> covariates;  // absent for the pure-noise model
  double y0 = 0.0;
  double y1 = 0.0;
};

using CrossWorldSample = std::vector<CrossWorldRow>;

/// One observed arm per unit.
struct FactualRow {
  std::uint64_t unit = 0;
  int t = 0;
  double y = 0.0;
};

/// Seeded per unit: unit i draws only from its own generator, so results do
/// not depend on n or on evaluation order.
std::mt19937_64 unit_stream(std::uint64_t seed, std::uint64_t unit, std::uint64_t purpose = 0);

/// Uniform on [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& gen);

/// Two independent standard normals (Box-Muller, written out so that output
/// does not depend on the standard library's distribution implementation).
std::pair<double, double> standard_normal_pair(std::mt19937_64& gen);

/// (E(0), E(1)) with correlation rho; rho = +/-1 copies or negates exactly.
std::pair<double, double> correlated_pair(std::mt19937_64& gen, Regime regime, double rho);

/// Pure-noise model: Y(t) = E(t).
CrossWorldSample sample_cross_world(const GaussianCouplingSpec& spec, std::size_t n, std::uint64_t seed);

/// Covariate model: Y(t) = 0.5 I[X0=1] (t+1) + 0.1 X2 E_{X1}(t).
CrossWorldSample sample_example2(const Example2Params& params, const GaussianCouplingSpec& spec);

struct Example2Output {
  CrossWorldSample sample;
  std::vector<FactualRow> factual;
};

Example2Output gen_example2(const Example2Params& params, const GaussianCouplingSpec& spec);

/// Keeps one arm per unit: treatment with probability `assignment_prob`, or
/// control for even row index and treatment for odd when `alternating`.
std::vector<FactualRow> rct_table(const CrossWorldSample& sample, double assignment_prob, std::uint64_t seed,
                                  bool alternating = false);

enum class GroupBy { None, X0, X1, X2 };

std::string_view group_by_name(GroupBy g);
GroupBy parse_group_by(std::string_view text);

enum class CorrelationMode {
  Raw,            // Pearson over the group's rows
  WithinProfile,  // standardize inside each (x0, x1, x2) profile, then pool
};

struct GroupCorrelation {
  std::optional<double> key;  // covariate value, nullopt for GroupBy::None
  std::size_t rows = 0;
  std::optional<double> corr;  // nullopt when undefined (fewer than 2 rows or zero variance)
};

std::vector<GroupCorrelation> estimate_correlation(const CrossWorldSample& sample, GroupBy group_by,
                                                   CorrelationMode mode = CorrelationMode::Raw);

/// Pearson correlation; nullopt when a column is constant or n < 2.
std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);

struct GroupEffect {
  std::optional<double> key;
  std::size_t rows = 0;
  double mean_effect = 0.0;  // mean of y1 - y0
};

std::vector<GroupEffect> mean_effects(const CrossWorldSample& sample, GroupBy group_by);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Header unit,x0,x1,x2,y0,y1; covariates are empty for the pure-noise model.
void write_cross_world_csv(std::ostream& out, const CrossWorldSample& sample);
/// Reads what write_cross_world_csv() writes. Throws Error(BadHeader) or
/// Error(SyntaxError).
CrossWorldSample parse_cross_world_csv(std::string_view text);

/// Header unit,t,y.
void write_factual_csv(std::ostream& out, const std::vector<FactualRow>& rows);

}  // namespace disco
