// Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
// exits non-zero if any failed. Tolerances and time budgets are fixed here.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "disco/coupling_io.hpp"
#include "disco/dataset.hpp"
#include "disco/model_io.hpp"
#include "disco/selection.hpp"
#include "disco/simulate.hpp"
#include "scenarios.hpp"

using namespace disco;
using namespace disco::testing;

namespace {

constexpr std::uint64_t kCorpusSeed = 771;
constexpr std::size_t kCorpusSize = 120;
constexpr std::uint64_t kMcSeed = 20250101;
constexpr std::size_t kMcN = 100000;

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string str(const Rational& r) { return to_fraction_string(r); }

const std::vector<ModelSpec>& corpus() {
  static const auto c = model_corpus(kCorpusSize, kCorpusSeed);
  return c;
}

std::vector<World> treatment_pair(const DiscoModel& m, const BinaryQuery& bq) {
  return {World{0, make_intervention(m, {{bq.treatment, bq.t}})},
          World{1, make_intervention(m, {{bq.treatment, bq.t_prime}})}};
}

std::string c1_table1() {
  Dataset d = load_dataset(data_path("table1.csv"));
  ArmSummary a = arm_summary(d);
  require(a.control_rows == 4 && a.treatment_rows == 4, "expected 4 + 4 rows");
  require(*a.treatment_mean == Rational(3, 4), "treatment mean " + str(*a.treatment_mean));
  require(*a.control_mean == Rational(1, 2), "control mean " + str(*a.control_mean));
  PopulationBounds b = population_bounds(stats_from_dataset(d));
  require(b.pns == Interval{Rational(1, 4), Rational(1, 2)}, "PNS [" + str(b.pns.lower) + ", " + str(b.pns.upper) + "]");
  require(b.pn == Interval{Rational(1, 3), Rational(2, 3)}, "PN [" + str(b.pn.lower) + ", " + str(b.pn.upper) + "]");
  require(pns_point_icn(stats_from_dataset(d)) == Rational(3, 8), "ICN PNS");

  // same report through the command line
  std::ostringstream out, err;
  int code = cli::run_command({"--format", "json", "bounds", "--data", data_path("table1.csv").string()}, out, err);
  require(code == 0, "cli: " + err.str());
  auto j = nlohmann::json::parse(out.str())["exact"];
  require(j["pns_interval"] == nlohmann::json::array({"1/4", "1/2"}), "cli PNS");
  require(j["pn_interval"] == nlohmann::json::array({"1/3", "2/3"}), "cli PN");
  require(j["pns_icn"] == "3/8", "cli ICN PNS");
  return "means 3/4 and 1/2, PNS [1/4, 1/2], PN [1/3, 2/3], ICN 3/8";
}

std::string c2_factorization() {
  std::mt19937_64 rng(2);
  std::size_t checks = 0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const ModelSpec& spec = corpus()[i];
    DiscoModel m = build_model(spec);
    Oracle oracle(spec);
    for (UnitIndex u = 0; u < m.num_units(); ++u) {
      for (int rep = 0; rep < 3; ++rep) {
        const std::size_t k = pick(rng, 1, 3);
        Scenario sc = random_scenario(rng, m, k);
        Coupling c = make_coupling(m, CouplingKind::Independent, sc.worlds);
        RandomEvent ev = random_event(rng, m, k);
        Rational engine_product(1), oracle_product(1);
        for (std::size_t w = 0; w < k; ++w) {
          Event per;
          std::vector<std::pair<std::string, Value>> oper;
          for (const auto& ct : ev.event.constraints) {
            if (ct.world_id != w) continue;
            per.emplace_back(ct.variable, ct.value);
            oper.emplace_back(m.variable(ct.variable).name, m.variable(ct.variable).domain[ct.value]);
          }
          engine_product *= layer2(m, u, sc.worlds[w].intervention, per);
          oracle_product *= oracle.probability(m.unit_name(u), sc.oracle_worlds[w], oper);
        }
        const Rational joint = layer3(m, u, c, ev.event);
        require(joint == engine_product, "model " + std::to_string(i) + ": layer3 " + str(joint) + " vs product " +
                                             str(engine_product));
        require(engine_product == oracle_product, "model " + std::to_string(i) + ": layer2 disagrees with oracle");
        ++checks;
      }
    }
  }
  require(corpus().size() >= 100, "corpus too small");
  return std::to_string(corpus().size()) + " models, " + std::to_string(checks) + " events";
}

std::string c3_triple_equality() {
  std::mt19937_64 rng(3);
  std::size_t checks = 0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const ModelSpec& spec = corpus()[i];
    DiscoModel m = build_model(spec);
    Oracle oracle(spec);
    const VarIndex T = m.require_variable("T");
    const VarIndex Y = m.require_variable("Y");
    for (UnitIndex u = 0; u < m.num_units(); ++u) {
      for (ValueIndex t = 0; t < 2; ++t) {
        if (layer1(m, u, {{T, t}}) == 0) continue;
        Event evidence;
        for (VarIndex v = 0; v < m.num_variables(); ++v) {
          if (rng() & 1) evidence.emplace_back(v, static_cast<ValueIndex>(rng() & 1));
        }
        if (layer1(m, u, evidence) == 0) evidence.clear();
        for (ValueIndex y = 0; y < 2; ++y) {
          LayerAgreement a = check_layer_agreement(m, u, make_intervention(m, {{T, t}}), {{Y, y}}, evidence);
          require(a.equal(), "model " + std::to_string(i) + " unit " + std::to_string(u) + ": " +
                                 str(a.counterfactual_given_evidence) + ", " + str(a.interventional) + ", " +
                                 str(a.observational_conditional));
          const Rational ref = oracle.probability(m.unit_name(u), OracleWorld{{{"T", Value(int(t))}}},
                                                  {{"Y", Value(int(y))}});
          require(a.interventional == ref, "model " + std::to_string(i) + ": oracle disagrees");
          ++checks;
        }
      }
    }
  }
  return std::to_string(checks) + " checks";
}

std::string c4_lemma() {
  std::size_t checks = 0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const ModelSpec& spec = corpus()[i];
    DiscoModel m = build_model(spec);
    Oracle oracle(spec);
    const VarIndex T = m.require_variable("T");
    const VarIndex Y = m.require_variable("Y");
    for (UnitIndex u = 0; u < m.num_units(); ++u) {
      for (ValueIndex y = 0; y < 2; ++y) {
        const Rational rhs = layer2(m, u, make_intervention(m, {{T, 1}}), {{Y, y}}) * layer1(m, u, {{T, 1}}) +
                             layer2(m, u, make_intervention(m, {{T, 0}}), {{Y, y}}) * layer1(m, u, {{T, 0}});
        const Rational lhs = oracle.probability(m.unit_name(u), OracleWorld{}, {{"Y", Value(int(y))}});
        require(layer1(m, u, {{Y, y}}) == lhs, "model " + std::to_string(i) + ": layer1 disagrees with oracle");
        require(lhs == rhs, "model " + std::to_string(i) + ": " + str(lhs) + " vs " + str(rhs));
        ++checks;
      }
    }
  }
  return std::to_string(checks) + " checks";
}

std::string c5_containment() {
  std::mt19937_64 rng(5);
  std::size_t instances = 0, couplings = 0, pn_checks = 0;
  for (int inst = 0; inst < 40; ++inst) {
    DiscoModel m = build_model(random_binary_instance(rng));
    BinaryQuery bq = make_binary_query(m, "T", Value(1), "Y", Value(1));
    CausalStats st = unit_stats(m, 0, bq);
    const Interval pns = pns_bounds(st);
    const bool pn_defined = st.p_t_y > 0 && st.p_tp_yp > 0;
    const NoiseDef& ey = m.noise(m.noise_of(bq.outcome));
    auto sweep = coupling_sweep(rng, ey.pmf, 20);
    require(sweep.size() >= 20, "instance " + std::to_string(inst) + ": only " + std::to_string(sweep.size()) +
                                    " couplings");
    for (const auto& table : sweep) {
      JointSpec joint{{ey.name, to_table_spec(table, ey.domain)}};
      Coupling c = make_coupling(m, CouplingKind::ExplicitJoint, treatment_pair(m, bq), joint);
      const Rational exact = response_types(m, 0, c, bq).complier;
      require(pns.contains(exact), "instance " + std::to_string(inst) + ": PNS " + str(exact) + " outside [" +
                                       str(pns.lower) + ", " + str(pns.upper) + "]");
      if (pn_defined) {
        const Rational pn = exact_poc(m, 0, c, bq).pn;
        require(pn_bounds(st).contains(pn), "instance " + std::to_string(inst) + ": PN " + str(pn));
        ++pn_checks;
      }
      ++couplings;
    }
    ++instances;
  }

  // attainment on the Table-1 instance
  DiscoModel t1 = load_model(data_path("table1.model.json"));
  BinaryQuery bq = make_binary_query(t1, "T", Value(1), "Y", Value(1));
  const Interval pns = pns_bounds(unit_stats(t1, 0, bq));
  require(pns == Interval{Rational(1, 4), Rational(1, 2)}, "Table-1 interval");
  Rational lo(1), hi(0);
  for (const char* file : {"table1_q_quarter.coupling.json", "table1_q_half.coupling.json"}) {
    auto doc = load_coupling_document(data_path(file));
    Coupling c = make_coupling(t1, doc.kind, treatment_pair(t1, bq), doc.joint);
    const Rational v = exact_poc(t1, 0, c, bq).pns;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  require(lo == pns.lower && hi == pns.upper, "extremes give " + str(lo) + " and " + str(hi));
  return std::to_string(instances) + " instances, " + std::to_string(couplings) + " couplings, " +
         std::to_string(pn_checks) + " PN checks; Table-1 endpoints 1/4 and 1/2 attained";
}

std::string c6_mediator() {
  std::mt19937_64 rng(6);
  std::size_t models = 0;
  for (const auto& spec : mediator_models()) {
    DiscoModel m = build_model(spec);
    BinaryQuery bq = make_binary_query(m, "T", Value(1), "Y", Value(1));
    const Rational upper = mediator_pns_upper(m, 0, bq, m.require_variable("Z")).mediator_upper;
    JointSpec joint;
    for (const auto& nd : m.noises()) {
      joint[nd.name] = to_table_spec(perturb(rng, product_table(nd.pmf, 2), nd.domain.size()), nd.domain);
    }
    for (auto kind : {CouplingKind::Independent, CouplingKind::Shared, CouplingKind::ExplicitJoint}) {
      Coupling c = make_coupling(m, kind, treatment_pair(m, bq), kind == CouplingKind::ExplicitJoint ? joint : JointSpec{});
      const Rational pns = response_types(m, 0, c, bq).complier;
      require(pns <= upper, "model " + std::to_string(models) + ": PNS " + str(pns) + " > bound " + str(upper));
    }
    ++models;
  }

  MediatorInputs in;
  in.p_z_do_t = {Rational(2, 5), Rational(3, 5)};
  in.p_z_do_tp = {Rational(4, 5), Rational(1, 5)};
  in.p_y_given_z_t = {Rational(3, 10), Rational(9, 10)};
  in.p_yp_given_z_tp = {Rational(4, 5), Rational(2, 5)};
  const double plug = to_double(mediator_upper_from_conditionals(in));
  require(std::abs(plug - 0.74) <= 1e-12, "plug-in gives " + shortest_double(plug));
  DiscoModel pm = load_model(data_path("mediator_plugin.model.json"));
  BinaryQuery pq = make_binary_query(pm, "T", Value(1), "Y", Value(1));
  const double fixture = to_double(mediator_pns_upper(pm, 0, pq, pm.require_variable("Z")).mediator_upper);
  require(std::abs(fixture - 0.74) <= 1e-12, "plug-in fixture gives " + shortest_double(fixture));

  DiscoModel sm = load_model(data_path("mediator_strict.model.json"));
  BinaryQuery sq = make_binary_query(sm, "T", Value(1), "Y", Value(1));
  MediatorReport strict = mediator_pns_upper(sm, 0, sq, sm.require_variable("Z"));
  require(strict.mediator_upper < strict.generic_upper, "strict fixture is not strict");
  return std::to_string(models) + " models; plug-in 0.74; fixture " + str(strict.mediator_upper) + " < " +
         str(strict.generic_upper);
}

std::string c7_benefit() {
  std::mt19937_64 rng(7);
  auto payoff = [&] { return Rational(long(pick(rng, 0, 8)) - 4, long(pick(rng, 1, 4))); };
  std::size_t checks = 0;
  for (int s = 0; s < 10; ++s) {
    const BenefitSpec spec{payoff(), payoff(), payoff(), payoff()};
    for (const auto& ms : corpus()) {
      DiscoModel m = build_model(ms);
      BinaryQuery bq = make_binary_query(m, "T", Value(1), "Y", Value(1));
      Scenario sc = random_scenario(rng, m, 2);
      sc.worlds = treatment_pair(m, bq);
      Coupling c = build(m, sc);
      for (UnitIndex u = 0; u < m.num_units(); ++u) {
        BenefitReport r = benefit_exact(m, u, c, bq, spec);
        require(*r.f == r.w + r.sigma * *r.pns, "decomposition fails");
        // independent route: payoff-weighted response types
        require(*r.f == benefit_from_response(response_types(m, u, c, bq), spec), "four-term sum disagrees");
        ++checks;
      }
    }
  }

  DiscoModel t1 = load_model(data_path("table1.model.json"));
  BinaryQuery bq = make_binary_query(t1, "T", Value(1), "Y", Value(1));
  Coupling icn = make_coupling(t1, CouplingKind::Independent, treatment_pair(t1, bq));
  const BenefitSpec table1_spec{Rational(2), Rational(1, 2), Rational(0), Rational(-1)};
  const Rational f = *benefit_exact(t1, 0, icn, bq, table1_spec).f;
  require(f == Rational(13, 16), "Table-1 f = " + str(f));

  DiscoModel rm = load_model(data_path("ranking.model.json"));
  BinaryQuery rq = make_binary_query(rm, "T", Value(1), "Y", Value(1));
  require(rm.num_units() == 5, "ranking fixture must have 5 units");
  for (int rep = 0; rep < 20; ++rep) {
    const BenefitSpec base{payoff(), payoff(), payoff(), payoff()};
    const Rational c = payoff();
    const BenefitSpec shifted{base.beta + c, base.gamma + c, base.theta + c, base.delta + c};
    auto a = rank_units(rm, rq, base);
    auto b = rank_units(rm, rq, shifted);
    for (std::size_t i = 0; i < a.size(); ++i) {
      require(a[i].unit == b[i].unit, "ranking changed under a payoff shift");
      require(b[i].score == a[i].score + c, "score not shifted by c");
    }
  }
  return std::to_string(checks) + " decompositions; Table-1 f = 13/16; shift invariance on 5 units";
}

double corr_of(const CrossWorldSample& s) {
  auto g = estimate_correlation(s, GroupBy::None);
  require(g.at(0).corr.has_value(), "undefined correlation");
  return *g.at(0).corr;
}

std::string c8_regimes() {
  std::ostringstream detail;
  const double shared = corr_of(sample_cross_world({Regime::Shared}, kMcN, kMcSeed));
  require(shared == 1.0, "shared corr " + shortest_double(shared));
  const double indep = corr_of(sample_cross_world({Regime::Independent}, kMcN, kMcSeed));
  require(std::abs(indep) <= 0.02, "independent corr " + shortest_double(indep));
  detail << "shared 1, independent " << format_double(indep, 3);
  for (double rho : {-0.5, 0.2, 0.5, 0.8}) {
    GaussianCouplingSpec spec{Regime::Correlated, rho};
    const double c = corr_of(sample_cross_world(spec, kMcN, kMcSeed));
    require(std::abs(c - rho) <= 0.02, "rho " + shortest_double(rho) + " estimated " + shortest_double(c));
    detail << ", rho " << rho << " -> " << format_double(c, 3);
  }
  return detail.str();
}

std::string c9_effects() {
  Example2Params p;
  p.n = kMcN;
  p.seed = kMcSeed;
  std::ostringstream detail;
  for (auto regime : {Regime::Shared, Regime::Correlated, Regime::Independent}) {
    auto s = sample_example2(p, {regime});
    for (const auto& g : mean_effects(s, GroupBy::X0)) {
      const double want = *g.key == 1.0 ? 0.5 : 0.0;
      require(std::abs(g.mean_effect - want) <= 0.01,
              std::string(regime_name(regime)) + ": x0=" + shortest_double(*g.key) + " effect " +
                  shortest_double(g.mean_effect));
      if (regime == Regime::Correlated) detail << "x0=" << *g.key << " -> " << format_double(g.mean_effect, 4) << ", ";
    }
    bool seen = false;
    for (const auto& g : estimate_correlation(s, GroupBy::X2, CorrelationMode::WithinProfile)) {
      if (*g.key != 0.0) continue;
      seen = true;
      require(!g.corr.has_value(), "x2=0 group has a correlation");
    }
    require(seen, "no x2=0 group");
    // raw values at x2=0 are the x0 offsets alone, so y1 = 2 y0 exactly
    for (const auto& g : estimate_correlation(s, GroupBy::X2, CorrelationMode::Raw)) {
      if (*g.key == 0.0) require(g.corr && std::abs(*g.corr - 1.0) <= 1e-12, "raw x2=0 correlation is not 1");
    }
  }
  detail << "x2=0 undefined within profiles";
  return detail.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string c10_reproducibility() {
  const auto dir = std::filesystem::temp_directory_path() / "disco_acceptance";
  std::filesystem::create_directories(dir);
  const std::string cross = (dir / "input.csv").string();
  {
    std::ostringstream out, err;
    require(cli::run_command({"simulate", "example2", "--n", "2000", "--seed", "5", "--out", cross}, out, err) == 0,
            err.str());
  }
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "example1", "--regime", "shared", "--n", "5000", "--seed", "42"},
      {"simulate", "example1", "--regime", "correlated", "--rho", "0.3", "--n", "5000", "--seed", "42"},
      {"simulate", "example1", "--regime", "independent", "--n", "5000", "--seed", "42"},
      {"simulate", "example2", "--regime", "shared", "--n", "5000", "--seed", "42"},
      {"simulate", "example2", "--regime", "correlated", "--n", "5000", "--seed", "42"},
      {"simulate", "example2", "--regime", "independent", "--n", "5000", "--seed", "42"},
      {"simulate", "rct", "--input", cross, "--seed", "42"},
      {"simulate", "rct", "--input", cross, "--alternating"},
  };
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> bytes;
    for (int run = 0; run < 2; ++run) {
      const auto out_path = dir / ("run" + std::to_string(i) + "_" + std::to_string(run) + ".csv");
      const auto rct_path = dir / ("rct" + std::to_string(i) + "_" + std::to_string(run) + ".csv");
      auto args = commands[i];
      args.insert(args.end(), {"--out", out_path.string()});
      if (args[1] == "example2") args.insert(args.end(), {"--rct-out", rct_path.string()});
      std::ostringstream out, err;
      require(cli::run_command(args, out, err) == 0, "command " + std::to_string(i) + ": " + err.str());
      bytes.push_back(slurp(out_path));
      if (args[1] == "example2") bytes.push_back(slurp(rct_path));
    }
    const std::size_t half = bytes.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
      require(!bytes[k].empty(), "command " + std::to_string(i) + " wrote nothing");
      require(bytes[k] == bytes[k + half], "command " + std::to_string(i) + " is not reproducible");
      ++files;
    }
  }
  std::filesystem::remove_all(dir);
  return std::to_string(commands.size()) + " commands, " + std::to_string(files) + " file pairs identical";
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0 = no runtime requirement
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Table-1 pipeline", 1.0, c1_table1},
      {2, "ICN factorization on the random corpus", 30.0, c2_factorization},
      {3, "layer agreement on the random corpus", 0, c3_triple_equality},
      {4, "total-probability identity on the random corpus", 0, c4_lemma},
      {5, "PNS/PN containment over coupling sweeps and attainment", 0, c5_containment},
      {6, "mediator bound dominance", 0, c6_mediator},
      {7, "benefit decomposition and ranking invariance", 0, c7_benefit},
      {8, "Monte Carlo regimes, pure-noise model", 10.0, c8_regimes},
      {9, "Monte Carlo effects, covariate model", 0, c9_effects},
      {10, "simulate reproducibility", 0, c10_reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.budget_seconds > 0 && secs >= c.budget_seconds) {
      ok = false;
      detail += "; over the " + format_double(c.budget_seconds, 3) + " s budget";
    }
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << detail << "; "
              << format_double(secs, 3) << " s)" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
