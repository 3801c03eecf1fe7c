#include "disco/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <tuple>

#include <boost/algorithm/string.hpp>

#include "disco/error.hpp"
#include "disco/rational.hpp"

namespace disco {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kAssignmentStream = 1;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, std::string(name) + " must lie in [0, 1], got " + shortest_double(p));
  }
}

std::optional<double> key_of(const CrossWorldRow& row, GroupBy g) {
  if (g == GroupBy::None) return std::nullopt;
  if (!row.covariates) throw Error(ErrorKind::InvalidParameter, "sample has no covariates to group by");
  switch (g) {
    case GroupBy::X0: return row.covariates->x0;
    case GroupBy::X1: return row.covariates->x1;
    case GroupBy::X2: return row.covariates->x2;
    case GroupBy::None: break;
  }
  return std::nullopt;
}

// Rows per group key, in ascending key order.
std::map<std::optional<double>, std::vector<const CrossWorldRow*>> group_rows(const CrossWorldSample& sample,
                                                                             GroupBy g) {
  std::map<std::optional<double>, std::vector<const CrossWorldRow*>> groups;
  for (const auto& row : sample) groups[key_of(row, g)].push_back(&row);
  return groups;
}

bool constant(const std::vector<double>& xs) {
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *lo == *hi;
}

void standardize(std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / static_cast<double>(xs.size()));
  for (double& x : xs) x = (x - mean) / sd;
}

}  // namespace

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Shared: return "shared";
    case Regime::Correlated: return "correlated";
    case Regime::Independent: return "independent";
  }
  return "unknown";
}

Regime parse_regime(std::string_view text) {
  if (text == "shared") return Regime::Shared;
  if (text == "correlated") return Regime::Correlated;
  if (text == "independent") return Regime::Independent;
  throw Error(ErrorKind::InvalidParameter, "unknown regime '" + std::string(text) + "'");
}

std::string_view group_by_name(GroupBy g) {
  switch (g) {
    case GroupBy::None: return "none";
    case GroupBy::X0: return "x0";
    case GroupBy::X1: return "x1";
    case GroupBy::X2: return "x2";
  }
  return "unknown";
}

GroupBy parse_group_by(std::string_view text) {
  if (text == "none") return GroupBy::None;
  if (text == "x0") return GroupBy::X0;
  if (text == "x1") return GroupBy::X1;
  if (text == "x2") return GroupBy::X2;
  throw Error(ErrorKind::InvalidParameter, "unknown grouping '" + std::string(text) + "'");
}

void check_coupling(const GaussianCouplingSpec& spec) {
  auto check = [](double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
      throw Error(ErrorKind::InvalidRho, "rho must lie in [-1, 1], got " + shortest_double(rho));
    }
  };
  check(spec.rho);
  for (const auto& [key, rho] : spec.rho_by_x1) {
    if (key != 0 && key != 1) throw Error(ErrorKind::InvalidRho, "rho keyed by x1=" + std::to_string(key));
    check(rho);
  }
  // x1 is binary; a partial map would leave one group without a rho
  if (!spec.rho_by_x1.empty()) {
    for (int key : {0, 1}) {
      if (!spec.rho_by_x1.count(key)) {
        throw Error(ErrorKind::InvalidRho, "no rho configured for x1=" + std::to_string(key));
      }
    }
  }
}

void check_params(const Example2Params& p) {
  if (p.n < 1) throw Error(ErrorKind::InvalidParameter, "n must be at least 1");
  check_probability(p.p_x0, "p_x0");
  check_probability(p.p_x1, "p_x1");
  check_probability(p.assignment_prob, "assignment_prob");
  if (p.x2_domain.empty()) throw Error(ErrorKind::InvalidParameter, "x2 domain is empty");
  for (double x : p.x2_domain) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::InvalidParameter, "x2 values must be finite and non-negative");
    }
  }
}

std::mt19937_64 unit_stream(std::uint64_t seed, std::uint64_t unit, std::uint64_t purpose) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(unit)) + purpose));
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::pair<double, double> standard_normal_pair(std::mt19937_64& gen) {
  const double u1 = 1.0 - uniform01(gen);  // (0, 1]
  const double u2 = uniform01(gen);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

std::pair<double, double> correlated_pair(std::mt19937_64& gen, Regime regime, double rho) {
  auto [z1, z2] = standard_normal_pair(gen);
  switch (regime) {
    case Regime::Shared: return {z1, z1};
    case Regime::Independent: return {z1, z2};
    case Regime::Correlated:
      if (rho == 1.0) return {z1, z1};
      if (rho == -1.0) return {z1, -z1};
      return {z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2};
  }
  return {z1, z2};
}

CrossWorldSample sample_cross_world(const GaussianCouplingSpec& spec, std::size_t n, std::uint64_t seed) {
  check_coupling(spec);
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be at least 1");
  CrossWorldSample sample(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto gen = unit_stream(seed, i);
    auto [e0, e1] = correlated_pair(gen, spec.regime, spec.rho);
    sample[i] = {i, std::nullopt, e0, e1};
  }
  return sample;
}

CrossWorldSample sample_example2(const Example2Params& params, const GaussianCouplingSpec& spec) {
  check_params(params);
  check_coupling(spec);
  CrossWorldSample sample(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    auto gen = unit_stream(params.seed, i);
    Covariates c;
    c.x0 = uniform01(gen) < params.p_x0 ? 1 : 0;
    c.x1 = uniform01(gen) < params.p_x1 ? 1 : 0;
    auto idx = static_cast<std::size_t>(uniform01(gen) * static_cast<double>(params.x2_domain.size()));
    c.x2 = params.x2_domain[std::min(idx, params.x2_domain.size() - 1)];

    double rho = spec.rho;
    if (spec.regime == Regime::Correlated && !spec.rho_by_x1.empty()) rho = spec.rho_by_x1.at(c.x1);
    auto [e0, e1] = correlated_pair(gen, spec.regime, rho);
    const double base = c.x0 == 1 ? 0.5 : 0.0;
    const double scale = 0.1 * c.x2;
    sample[i] = {i, c, base * 1.0 + scale * e0, base * 2.0 + scale * e1};
  }
  return sample;
}

std::vector<FactualRow> rct_table(const CrossWorldSample& sample, double assignment_prob, std::uint64_t seed,
                                  bool alternating) {
  check_probability(assignment_prob, "assignment_prob");
  std::vector<FactualRow> rows;
  rows.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& r = sample[i];
    int t;
    if (alternating) {
      t = i % 2 == 0 ? 0 : 1;
    } else {
      auto gen = unit_stream(seed, r.unit, kAssignmentStream);
      t = uniform01(gen) < assignment_prob ? 1 : 0;
    }
    rows.push_back({r.unit, t, t == 1 ? r.y1 : r.y0});
  }
  return rows;
}

Example2Output gen_example2(const Example2Params& params, const GaussianCouplingSpec& spec) {
  Example2Output out;
  out.sample = sample_example2(params, spec);
  out.factual = rct_table(out.sample, params.assignment_prob, params.seed);
  return out;
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n < 2 || b.size() != n || constant(a) || constant(b)) return std::nullopt;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  // Identical columns give exactly 1 regardless of rounding in the sums.
  if (a == b) return 1.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<GroupCorrelation> estimate_correlation(const CrossWorldSample& sample, GroupBy group_by,
                                                   CorrelationMode mode) {
  std::vector<GroupCorrelation> out;
  for (const auto& [key, rows] : group_rows(sample, group_by)) {
    GroupCorrelation g{key, rows.size(), std::nullopt};
    std::vector<double> y0, y1;
    if (mode == CorrelationMode::Raw) {
      for (const auto* r : rows) {
        y0.push_back(r->y0);
        y1.push_back(r->y1);
      }
    } else {
      std::map<std::tuple<int, int, double>, std::vector<const CrossWorldRow*>> profiles;
      for (const auto* r : rows) {
        if (!r->covariates) throw Error(ErrorKind::InvalidParameter, "within-profile mode needs covariates");
        profiles[{r->covariates->x0, r->covariates->x1, r->covariates->x2}].push_back(r);
      }
      for (const auto& [profile, members] : profiles) {
        std::vector<double> a, b;
        for (const auto* r : members) {
          a.push_back(r->y0);
          b.push_back(r->y1);
        }
        if (a.size() < 2 || constant(a) || constant(b)) continue;
        standardize(a);
        standardize(b);
        y0.insert(y0.end(), a.begin(), a.end());
        y1.insert(y1.end(), b.begin(), b.end());
      }
    }
    g.corr = pearson(y0, y1);
    out.push_back(g);
  }
  return out;
}

std::vector<GroupEffect> mean_effects(const CrossWorldSample& sample, GroupBy group_by) {
  std::vector<GroupEffect> out;
  for (const auto& [key, rows] : group_rows(sample, group_by)) {
    double sum = 0.0;
    for (const auto* r : rows) sum += r->y1 - r->y0;
    out.push_back({key, rows.size(), sum / static_cast<double>(rows.size())});
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InvalidParameter, "KS statistic needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

void write_cross_world_csv(std::ostream& out, const CrossWorldSample& sample) {
  out << "unit,x0,x1,x2,y0,y1\n";
  for (const auto& r : sample) {
    out << r.unit << ',';
    if (r.covariates) {
      out << r.covariates->x0 << ',' << r.covariates->x1 << ',' << shortest_double(r.covariates->x2);
    } else {
      out << ",,";
    }
    out << ',' << shortest_double(r.y0) << ',' << shortest_double(r.y1) << '\n';
  }
}

namespace {

template <typename T>
T parse_number(const std::string& field, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::SyntaxError, where + ": '" + field + "' is not a number");
  }
  return value;
}

}  // namespace

CrossWorldSample parse_cross_world_csv(std::string_view text) {
  std::vector<std::string> lines;
  boost::split(lines, text, boost::is_any_of("\n"));
  for (auto& l : lines) boost::trim(l);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != "unit,x0,x1,x2,y0,y1") {
    throw Error(ErrorKind::BadHeader, "expected header 'unit,x0,x1,x2,y0,y1'");
  }
  CrossWorldSample sample;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "line " + std::to_string(i + 1);
    std::vector<std::string> f;
    boost::split(f, lines[i], boost::is_any_of(","));
    if (f.size() != 6) throw Error(ErrorKind::SyntaxError, where + ": expected 6 fields");
    CrossWorldRow row;
    row.unit = parse_number<std::uint64_t>(f[0], where);
    if (!f[1].empty() || !f[2].empty() || !f[3].empty()) {
      row.covariates = Covariates{parse_number<int>(f[1], where), parse_number<int>(f[2], where),
                                  parse_number<double>(f[3], where)};
    }
    row.y0 = parse_number<double>(f[4], where);
    row.y1 = parse_number<double>(f[5], where);
    sample.push_back(row);
  }
  return sample;
}

void write_factual_csv(std::ostream& out, const std::vector<FactualRow>& rows) {
  out << "unit,t,y\n";
  for (const auto& r : rows) out << r.unit << ',' << r.t << ',' << shortest_double(r.y) << '\n';
}

}  // namespace disco
