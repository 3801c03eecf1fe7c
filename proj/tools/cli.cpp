#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "disco/coupling_io.hpp"
#include "disco/dataset.hpp"
#include "disco/model_io.hpp"
#include "disco/selection.hpp"
#include "disco/simulate.hpp"

namespace disco::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numbers go into the document as doubles; their exact fractions are
// collected under "exact".
class Report {
 public:
  void set(const std::string& key, ojson value) { doc_[key] = std::move(value); }

  void prob(const std::string& key, const Rational& p) {
    doc_[key] = to_double(p);
    exact_[key] = to_fraction_string(p);
  }

  void interval(const std::string& key, const Interval& i) {
    doc_[key] = {to_double(i.lower), to_double(i.upper)};
    exact_[key] = {to_fraction_string(i.lower), to_fraction_string(i.upper)};
  }

  void nested(const std::string& key, Report inner) {
    doc_[key] = inner.doc_;
    if (!inner.exact_.empty()) exact_[key] = inner.exact_;
  }

  void merge(const Report& other) {
    doc_.update(other.doc_);
    exact_.update(other.exact_);
  }

  ojson finish() const {
    ojson out = doc_;
    if (!exact_.empty()) out["exact"] = exact_;
    return out;
  }

 private:
  ojson doc_ = ojson::object();
  ojson exact_ = ojson::object();
};

std::string scalar_text(const ojson& v) {
  if (v.is_null()) return "undefined";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
    return s + "]";
  }
  return v.dump();
}

bool is_flat(const ojson& v) {
  if (v.is_object()) return false;
  if (v.is_array()) return std::all_of(v.begin(), v.end(), [](const ojson& x) { return !x.is_structured(); });
  return true;
}

void render_text(const ojson& doc, std::ostream& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : doc.items()) {
    if (key == "exact") continue;
    if (is_flat(value)) {
      out << pad << key << ": " << scalar_text(value) << '\n';
    } else if (value.is_object()) {
      out << pad << key << ":\n";
      render_text(value, out, indent + 2);
    } else {
      out << pad << key << ":\n";
      for (const auto& item : value) {
        if (item.is_object()) {
          out << pad << "  -\n";
          render_text(item, out, indent + 4);
        } else {
          out << pad << "  - " << scalar_text(item) << '\n';
        }
      }
    }
  }
}

void emit(const ojson& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    render_text(doc, out);
  }
}

std::vector<Binding> parse_bindings(const std::vector<std::string>& items) {
  std::vector<Binding> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == part.size()) {
        throw UsageError("expected VAR=VALUE, got '" + part + "'");
      }
      out.push_back({part.substr(0, eq), Value::parse(part.substr(eq + 1))});
    }
  }
  return out;
}

Rational parse_payoff(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw UsageError(std::string("--") + name + " expects a number, got '" + text + "'");
  }
}

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("DISCO_SEED"); env != nullptr && *env != '\0') {
    std::string_view s(env);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("DISCO_SEED must be an unsigned integer");
    return value;
  }
  return seed;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content)) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
}

Report stats_report(const CausalStats& s) {
  Report r;
  r.prob("p_t", s.p_t);
  r.prob("p_y_do_t", s.p_y_do_t);
  r.prob("p_y_do_t_prime", s.p_y_do_tp);
  r.prob("p_y", s.p_y);
  r.prob("p_t_y", s.p_t_y);
  r.prob("p_t_prime_y_prime", s.p_tp_yp);
  r.prob("p_t_y_prime", s.p_t_yp);
  r.prob("p_t_prime_y", s.p_tp_y);
  return r;
}

Coupling coupling_from_option(const DiscoModel& model, const std::string& option, std::vector<World> worlds) {
  if (option == "independent") return make_coupling(model, CouplingKind::Independent, std::move(worlds));
  if (option == "shared") return make_coupling(model, CouplingKind::Shared, std::move(worlds));
  CouplingDocument doc = load_coupling_document(option);
  return make_coupling(model, doc.kind, std::move(worlds), doc.joint);
}

// ---- validate ----

struct ValidateArgs {
  std::string model;
};

int run_validate(const ValidateArgs& a, const std::string& format, std::ostream& out) {
  ModelSpec spec = load_model_spec(a.model);
  ValidationReport report = validate_model(spec);
  ojson doc;
  doc["valid"] = report.ok();
  doc["units"] = spec.units.size();
  doc["variables"] = spec.variables.size();
  doc["noises"] = spec.noises.size();
  if (!report.ok()) {
    ojson issues = ojson::array();
    for (const auto& i : report.issues) {
      issues.push_back({{"error", std::string(error_name(i.kind))}, {"element", i.element}, {"message", i.message}});
    }
    doc["issues"] = issues;
  }
  if (format == "json") {
    out << doc.dump(2) << '\n';
  } else if (report.ok()) {
    out << "valid: " << spec.variables.size() << " variables, " << spec.noises.size() << " noises, "
        << spec.units.size() << " units\n";
  } else {
    for (const auto& i : report.issues) out << error_name(i.kind) << ": " << i.element << ": " << i.message << '\n';
  }
  return report.ok() ? kExitOk : kExitDomainError;
}

// ---- query / population-query ----

struct QueryArgs {
  std::string model;
  std::string unit;
  std::vector<std::string> do_;
  std::vector<std::string> given;
  std::vector<std::string> event;
  std::string coupling = "independent";
};

int run_query(const QueryArgs& a, const std::string& format, std::ostream& out) {
  DiscoModel model = load_model(a.model);
  UnitIndex unit = model.require_unit(a.unit);
  auto do_bindings = parse_bindings(a.do_);
  auto event_bindings = parse_bindings(a.event);
  auto given_bindings = parse_bindings(a.given);
  Event event = make_single_world_event(model, event_bindings);
  Intervention x = make_intervention(model, do_bindings);

  Report r;
  r.set("unit", a.unit);
  Rational p;
  if (given_bindings.empty()) {
    r.set("layer", x.empty() ? 1 : 2);
    p = layer2(model, unit, x, event);
  } else if (x.empty()) {
    // Evidence and event live in the same factual world.
    Event given = make_single_world_event(model, given_bindings);
    Rational den = layer1(model, unit, given);
    if (den == 0) throw Error(ErrorKind::ZeroProbabilityEvidence, "evidence has probability zero for unit '" + a.unit + "'");
    Event both = given;
    both.insert(both.end(), event.begin(), event.end());
    r.set("layer", 1);
    p = layer1(model, unit, both) / den;
  } else {
    Coupling coupling = coupling_from_option(model, a.coupling, {factual_world(0), World{1, x}});
    r.set("layer", 3);
    r.set("coupling", std::string(coupling_kind_name(coupling.kind())));
    p = conditional(model, unit, coupling, make_event(model, 1, event_bindings), make_event(model, 0, given_bindings));
  }
  r.prob("probability", p);
  emit(r.finish(), format, out);
  return kExitOk;
}

struct PopulationArgs {
  std::string model;
  std::vector<std::string> evidence;
  std::vector<std::string> do_;
  std::vector<std::string> event;
};

int run_population_query(const PopulationArgs& a, const std::string& format, std::ostream& out) {
  DiscoModel model = load_model(a.model);
  Event evidence = make_single_world_event(model, parse_bindings(a.evidence));
  Intervention x = make_intervention(model, parse_bindings(a.do_));
  Event event = make_single_world_event(model, parse_bindings(a.event));
  Posterior post = abduct(model, evidence);
  Report weights;
  for (UnitIndex u = 0; u < model.num_units(); ++u) weights.prob(model.unit_name(u), post.weights[u]);
  Report r;
  r.prob("probability", population_query(model, evidence, x, event));
  r.nested("posterior", weights);
  emit(r.finish(), format, out);
  return kExitOk;
}

// ---- bounds / benefit ----

struct StatsSource {
  std::string model;
  std::string unit;
  std::string data;
  bool population = false;
  std::string treatment = "T";
  std::string outcome = "Y";
  std::string t = "1";
  std::string y = "1";
  std::string coupling;
};

struct Resolved {
  std::optional<DiscoModel> model;
  std::optional<UnitIndex> unit;
  std::optional<BinaryQuery> query;
  CausalStats stats;
};

Resolved resolve(const StatsSource& s) {
  Resolved r;
  if (!s.data.empty()) {
    if (!s.model.empty() || !s.unit.empty() || s.population) {
      throw UsageError("--data cannot be combined with --model, --unit or --population");
    }
    r.stats = stats_from_dataset(load_dataset(s.data), Value::parse(s.t), parse_rational(s.y));
    return r;
  }
  if (s.model.empty()) throw UsageError("either --model or --data is required");
  r.model = load_model(s.model);
  r.query = make_binary_query(*r.model, s.treatment, Value::parse(s.t), s.outcome, Value::parse(s.y));
  if (s.population) {
    if (!s.unit.empty()) throw UsageError("--population and --unit are exclusive");
    r.stats = population_stats(*r.model, *r.query);
  } else {
    if (s.unit.empty()) throw UsageError("--unit is required unless --population or --data is given");
    r.unit = r.model->require_unit(s.unit);
    r.stats = unit_stats(*r.model, *r.unit, *r.query);
  }
  return r;
}

std::vector<World> treatment_world_list(const DiscoModel& model, const BinaryQuery& q) {
  return {World{0, make_intervention(model, {{q.treatment, q.t}})},
          World{1, make_intervention(model, {{q.treatment, q.t_prime}})}};
}

void require_unit_model(const Resolved& r, const char* option) {
  if (!r.model || !r.unit) throw UsageError(std::string(option) + " needs --model and --unit");
}

struct BoundsArgs {
  StatsSource source;
  std::string mediator;
};

int run_bounds(const BoundsArgs& a, const std::string& format, std::ostream& out) {
  Resolved res = resolve(a.source);
  Report r;
  r.nested("stats", stats_report(res.stats));
  r.interval("pns_interval", pns_bounds(res.stats));
  if (res.stats.p_t_y == 0) {
    r.set("pn_interval", nullptr);
    r.set("pn_error", std::string(error_name(ErrorKind::UndefinedPn)));
  } else {
    r.interval("pn_interval", pn_bounds(res.stats));
  }
  r.prob("pns_icn", pns_point_icn(res.stats));
  r.prob("ps_icn", res.stats.p_y_do_t);

  if (!a.source.coupling.empty()) {
    require_unit_model(res, "--coupling");
    Coupling coupling = coupling_from_option(*res.model, a.source.coupling, treatment_world_list(*res.model, *res.query));
    PoCReport poc = exact_poc(*res.model, *res.unit, coupling, *res.query);
    Report e;
    e.set("coupling", std::string(coupling_kind_name(coupling.kind())));
    e.prob("pns", poc.pns);
    e.prob("pn", poc.pn);
    e.prob("ps", poc.ps);
    e.prob("complier", poc.response.complier);
    e.prob("always_taker", poc.response.always_taker);
    e.prob("never_taker", poc.response.never_taker);
    e.prob("defier", poc.response.defier);
    r.nested("coupled", e);
  }
  if (!a.mediator.empty()) {
    require_unit_model(res, "--mediator");
    MediatorReport m = mediator_pns_upper(*res.model, *res.unit, *res.query, res.model->require_variable(a.mediator));
    Report e;
    e.set("variable", a.mediator);
    e.prob("upper", m.mediator_upper);
    e.prob("generic_upper", m.generic_upper);
    e.prob("combined_upper", m.combined_upper);
    r.nested("mediator", e);
  }
  emit(r.finish(), format, out);
  return kExitOk;
}

struct BenefitArgs {
  StatsSource source;
  std::string beta, gamma, theta, delta;
  bool rank = false;
};

Report benefit_fields(const BenefitReport& b) {
  Report r;
  r.prob("w", b.w);
  r.prob("sigma", b.sigma);
  r.interval("pns_interval", b.pns_interval);
  r.interval("f_interval", b.f_interval);
  if (b.pns) r.prob("pns", *b.pns);
  if (b.f) r.prob("f", *b.f);
  return r;
}

int run_benefit(const BenefitArgs& a, const std::string& format, std::ostream& out) {
  BenefitSpec spec{parse_payoff(a.beta, "beta"), parse_payoff(a.gamma, "gamma"), parse_payoff(a.theta, "theta"),
                   parse_payoff(a.delta, "delta")};
  if (a.rank) {
    StatsSource s = a.source;
    if (s.model.empty() || !s.data.empty()) throw UsageError("--rank needs --model");
    DiscoModel model = load_model(s.model);
    BinaryQuery q = make_binary_query(model, s.treatment, Value::parse(s.t), s.outcome, Value::parse(s.y));
    std::optional<Coupling> coupling;
    if (!s.coupling.empty()) coupling = coupling_from_option(model, s.coupling, treatment_world_list(model, q));
    ojson ranking = ojson::array();
    for (const auto& ru : rank_units(model, q, spec, coupling ? &*coupling : nullptr)) {
      Report item;
      item.set("unit", model.unit_name(ru.unit));
      item.prob("score", ru.score);
      item.merge(benefit_fields(ru.report));
      ranking.push_back(item.finish());
    }
    ojson doc;
    doc["ranking"] = ranking;
    emit(doc, format, out);
    return kExitOk;
  }

  Resolved res = resolve(a.source);
  BenefitReport b;
  if (!a.source.coupling.empty()) {
    require_unit_model(res, "--coupling");
    Coupling coupling = coupling_from_option(*res.model, a.source.coupling, treatment_world_list(*res.model, *res.query));
    b = benefit_exact(*res.model, *res.unit, coupling, *res.query, spec);
  } else {
    b = benefit_report(res.stats, spec);
  }
  emit(benefit_fields(b).finish(), format, out);
  return kExitOk;
}

// ---- simulate ----

struct SimulateArgs {
  std::string regime = "independent";
  double rho = 0.5;
  double rho0 = 0.2;
  double rho1 = 0.8;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  double p_x0 = 0.5;
  double p_x1 = 0.5;
  std::vector<double> x2 = {0.0, 1.0, 2.0};
  double assignment_prob = 0.5;
  bool alternating = false;
  std::string input;
  std::string out;
  std::string rct_out;
};

ojson group_key(const std::optional<double>& key) { return key ? ojson(*key) : ojson(nullptr); }

ojson correlation_groups(const CrossWorldSample& sample, GroupBy g, CorrelationMode mode) {
  ojson groups = ojson::array();
  for (const auto& c : estimate_correlation(sample, g, mode)) {
    ojson item;
    item[std::string(group_by_name(g))] = group_key(c.key);
    item["rows"] = c.rows;
    item["corr"] = c.corr ? ojson(*c.corr) : ojson(nullptr);
    groups.push_back(item);
  }
  return groups;
}

int run_simulate(const std::string& which, const SimulateArgs& a, const std::string& format, std::ostream& out) {
  const std::uint64_t seed = effective_seed(a.seed);
  GaussianCouplingSpec spec;
  spec.regime = parse_regime(a.regime);
  spec.rho = a.rho;
  spec.rho_by_x1 = {{0, a.rho0}, {1, a.rho1}};

  std::ostringstream csv;
  ojson summary;
  summary["seed"] = seed;

  if (which == "example1") {
    CrossWorldSample sample = sample_cross_world(spec, a.n, seed);
    write_cross_world_csv(csv, sample);
    std::vector<double> y0, y1;
    for (const auto& r : sample) {
      y0.push_back(r.y0);
      y1.push_back(r.y1);
    }
    auto corr = pearson(y0, y1);
    summary["regime"] = std::string(regime_name(spec.regime));
    summary["rows"] = sample.size();
    summary["corr"] = corr ? ojson(*corr) : ojson(nullptr);
    summary["ks"] = ks_statistic(y0, y1);
  } else if (which == "example2") {
    Example2Params p;
    p.n = a.n;
    p.p_x0 = a.p_x0;
    p.p_x1 = a.p_x1;
    p.x2_domain = a.x2;
    p.assignment_prob = a.assignment_prob;
    p.seed = seed;
    Example2Output gen = gen_example2(p, spec);
    write_cross_world_csv(csv, gen.sample);
    if (!a.rct_out.empty()) {
      std::ostringstream rct;
      write_factual_csv(rct, gen.factual);
      write_file(a.rct_out, rct.str());
    }
    summary["regime"] = std::string(regime_name(spec.regime));
    summary["rows"] = gen.sample.size();
    summary["corr_by_x1"] = correlation_groups(gen.sample, GroupBy::X1, CorrelationMode::WithinProfile);
    summary["corr_by_x2"] = correlation_groups(gen.sample, GroupBy::X2, CorrelationMode::WithinProfile);
    ojson effects = ojson::array();
    for (const auto& e : mean_effects(gen.sample, GroupBy::X0)) {
      effects.push_back({{"x0", group_key(e.key)}, {"rows", e.rows}, {"mean_effect", e.mean_effect}});
    }
    summary["effect_by_x0"] = effects;
  } else {
    CrossWorldSample sample = parse_cross_world_csv(read_text_file(a.input));
    auto rows = rct_table(sample, a.assignment_prob, seed, a.alternating);
    write_factual_csv(csv, rows);
    std::size_t treated = 0;
    for (const auto& r : rows) treated += static_cast<std::size_t>(r.t);
    summary["rows"] = rows.size();
    summary["treated"] = treated;
    summary["control"] = rows.size() - treated;
  }

  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_file(a.out, csv.str());
    summary["out"] = a.out;
    if (!a.rct_out.empty()) summary["rct_out"] = a.rct_out;
    emit(summary, format, out);
  }
  return kExitOk;
}

// ---- stats ----

struct StatsArgs {
  std::string data;
  std::string treated = "1";
  std::string y = "1";
};

int run_stats(const StatsArgs& a, const std::string& format, std::ostream& out) {
  Dataset data = load_dataset(a.data);
  Value treated = Value::parse(a.treated);
  ArmSummary s = arm_summary(data, treated);
  Report r;
  r.set("rows", data.rows.size());
  r.set("control_rows", s.control_rows);
  r.set("treatment_rows", s.treatment_rows);
  r.set("incomplete_rows", s.incomplete_rows);
  if (s.control_mean) r.prob("control_mean", *s.control_mean); else r.set("control_mean", nullptr);
  if (s.treatment_mean) r.prob("treatment_mean", *s.treatment_mean); else r.set("treatment_mean", nullptr);
  emit(r.finish(), format, out);
  return kExitOk;
}

void add_source_options(CLI::App* sub, StatsSource& s) {
  sub->add_option("--model", s.model, "Model JSON file");
  sub->add_option("--unit", s.unit, "Unit id");
  sub->add_option("--data", s.data, "Dataset CSV (unit,t,y) read as an RCT");
  sub->add_flag("--population", s.population, "Aggregate stats over the unit prior");
  sub->add_option("--treatment", s.treatment, "Treatment variable")->capture_default_str();
  sub->add_option("--outcome", s.outcome, "Outcome variable")->capture_default_str();
  sub->add_option("--t", s.t, "Treatment value t")->capture_default_str();
  sub->add_option("--y", s.y, "Outcome value y")->capture_default_str();
  sub->add_option("--coupling", s.coupling, "independent, shared, or a coupling JSON file");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counterfactual inference for unit-indexed causal models", "disco"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check a model file");
  v->add_option("model", validate.model, "Model JSON file")->required();

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Probability of an event for one unit");
  q->add_option("--model", query.model)->required();
  q->add_option("--unit", query.unit)->required();
  q->add_option("--do", query.do_, "Intervention VAR=V (repeatable)");
  q->add_option("--given", query.given, "Factual evidence VAR=V (repeatable)");
  q->add_option("--event", query.event, "Event VAR=V[,VAR=V...]")->required();
  q->add_option("--coupling", query.coupling, "independent, shared, or a coupling JSON file")->capture_default_str();

  PopulationArgs pop;
  auto* pq = app.add_subcommand("population-query", "Posterior-weighted query over all units");
  pq->add_option("--model", pop.model)->required();
  pq->add_option("--evidence", pop.evidence, "Evidence VAR=V (repeatable)");
  pq->add_option("--do", pop.do_, "Intervention VAR=V (repeatable)");
  pq->add_option("--event", pop.event, "Event VAR=V[,VAR=V...]")->required();

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "PNS and PN intervals");
  add_source_options(b, bounds.source);
  b->add_option("--mediator", bounds.mediator, "Mediator variable for the tighter upper bound");

  BenefitArgs benefit;
  auto* bf = app.add_subcommand("benefit", "Unit-selection benefit");
  add_source_options(bf, benefit.source);
  bf->add_option("--beta", benefit.beta, "Payoff for a complier")->required();
  bf->add_option("--gamma", benefit.gamma, "Payoff for an always-taker")->required();
  bf->add_option("--theta", benefit.theta, "Payoff for a never-taker")->required();
  bf->add_option("--delta", benefit.delta, "Payoff for a defier")->required();
  bf->add_flag("--rank", benefit.rank, "Rank every unit of the model");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo generators");
  s->require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", sim.seed, "64-bit seed (DISCO_SEED overrides)")->capture_default_str();
    sub->add_option("--out", sim.out, "Output CSV (stdout when omitted)");
  };
  auto* e1 = s->add_subcommand("example1", "Pure-noise cross-world pairs");
  e1->add_option("--regime", sim.regime)->check(CLI::IsMember({"shared", "correlated", "independent"}))->capture_default_str();
  e1->add_option("--rho", sim.rho, "Correlation for the correlated regime")->capture_default_str();
  e1->add_option("--n", sim.n)->capture_default_str();
  add_common(e1);
  auto* e2 = s->add_subcommand("example2", "Covariate model with heterogeneous effects");
  e2->add_option("--regime", sim.regime)->check(CLI::IsMember({"shared", "correlated", "independent"}))->capture_default_str();
  e2->add_option("--rho0", sim.rho0, "Correlation when x1=0")->capture_default_str();
  e2->add_option("--rho1", sim.rho1, "Correlation when x1=1")->capture_default_str();
  e2->add_option("--n", sim.n)->capture_default_str();
  e2->add_option("--p-x0", sim.p_x0)->capture_default_str();
  e2->add_option("--p-x1", sim.p_x1)->capture_default_str();
  e2->add_option("--x2", sim.x2, "Values of x2, drawn uniformly")->capture_default_str();
  e2->add_option("--assignment-prob", sim.assignment_prob)->capture_default_str();
  e2->add_option("--rct-out", sim.rct_out, "Also write the factual unit,t,y table");
  add_common(e2);
  auto* rct = s->add_subcommand("rct", "Keep one arm per unit of a cross-world CSV");
  rct->add_option("--input", sim.input, "Cross-world CSV")->required();
  rct->add_option("--assignment-prob", sim.assignment_prob)->capture_default_str();
  rct->add_flag("--alternating", sim.alternating, "Even rows control, odd rows treatment");
  add_common(rct);

  StatsArgs stats;
  auto* st = app.add_subcommand("stats", "Arm means of a dataset");
  st->add_option("--data", stats.data)->required();
  st->add_option("--treated", stats.treated, "t value of the treatment arm")->capture_default_str();

  for (auto* sub : {v, q, pq, b, bf, s, st, e1, e2, rct}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (*v) return run_validate(validate, format, out);
    if (*q) return run_query(query, format, out);
    if (*pq) return run_population_query(pop, format, out);
    if (*b) return run_bounds(bounds, format, out);
    if (*bf) return run_benefit(benefit, format, out);
    if (*e1) return run_simulate("example1", sim, format, out);
    if (*e2) return run_simulate("example2", sim, format, out);
    if (*rct) return run_simulate("rct", sim, format, out);
    if (*st) return run_stats(stats, format, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const Error& e) {
    if (format == "json") {
      ojson doc;
      doc["error"] = std::string(e.name());
      doc["message"] = e.what();
      out << doc.dump(2) << '\n';
    }
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace disco::cli
