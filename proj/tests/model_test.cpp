#include <gtest/gtest.h>

#include <random>

#include "builders.hpp"
#include "disco/model.hpp"
#include "disco/model_io.hpp"
#include "generators.hpp"

using namespace disco;
using namespace disco::testing;

namespace {

bool has_issue(const ValidationReport& r, ErrorKind kind) {
  for (const auto& i : r.issues) {
    if (i.kind == kind) return true;
  }
  return false;
}

ErrorKind build_error(const ModelSpec& s) {
  try {
    build_model(s);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "build_model accepted an invalid spec";
  return ErrorKind::IoError;
}

}  // namespace

TEST(BuildModel, SmallestLegalModel) {
  DiscoModel m = build_model(identity_spec());
  EXPECT_EQ(m.num_variables(), 1u);
  EXPECT_EQ(m.num_noises(), 1u);
  EXPECT_EQ(m.num_units(), 1u);
  EXPECT_EQ(m.unit_weight(0), Rational(1));
}

TEST(BuildModel, Example2Surrogate) {
  DiscoModel m = load_model(data_path("example2_surrogate.model.json"));
  EXPECT_EQ(m.num_variables(), 3u);
  EXPECT_EQ(m.num_units(), 3u);
  EXPECT_TRUE(m.find_variable("Y").has_value());
}

TEST(BuildModel, MissingRowIsPartialTable) {
  ModelSpec s = xor_spec();
  s.units = {"u1"};
  auto& rows = s.functions[1].rows;
  // replace the wildcard rows by u1 rows and drop (u1, T=1, e=0)
  for (auto& r : rows) r.unit = "u1";
  std::erase_if(rows, [](const TableRow& r) { return r.parents[0] == Value(1) && r.noise == Value(0); });
  EXPECT_EQ(build_error(s), ErrorKind::PartialFunctionTable);
  auto report = validate_model(s);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_NE(report.issues[0].message.find("T=1"), std::string::npos);
}

TEST(BuildModel, UnitRowOverridesWildcard) {
  ModelSpec s = identity_spec();
  s.units = {"a", "b"};
  s.functions[0].rows.push_back(row({}, 1, 0, "b"));
  DiscoModel m = build_model(s);
  std::vector<ValueIndex> none;
  EXPECT_EQ(m.function(0)(0, none, 1), 1u);
  EXPECT_EQ(m.function(0)(1, none, 1), 0u);
}

TEST(BuildModel, ConflictingRows) {
  ModelSpec s = identity_spec();
  s.functions[0].rows.push_back(row({}, 1, 0));
  EXPECT_EQ(build_error(s), ErrorKind::ConflictingRow);
}

TEST(BuildModel, RepeatedIdenticalRowIsHarmless) {
  ModelSpec s = identity_spec();
  s.functions[0].rows.push_back(row({}, 1, 1));
  EXPECT_NO_THROW(build_model(s));
}

TEST(BuildModel, CycleIsRejected) {
  ModelSpec s;
  s.units = {"u"};
  s.noises = {point_noise("E_A"), point_noise("E_B")};
  s.variables = {binary("A"), binary("B")};
  s.functions = {{"A", {"B"}, "E_A", {row({0}, 0, 0), row({1}, 0, 1)}},
                 {"B", {"A"}, "E_B", {row({0}, 0, 0), row({1}, 0, 1)}}};
  EXPECT_EQ(build_error(s), ErrorKind::CyclicGraph);
  EXPECT_THROW(topological_order(s), Error);
}

TEST(BuildModel, DuplicateNames) {
  ModelSpec s = identity_spec();
  s.units = {"u", "u"};
  EXPECT_EQ(build_error(s), ErrorKind::DuplicateName);
}

TEST(BuildModel, UnknownParent) {
  ModelSpec s = xor_spec();
  s.functions[1].parents = {"Q"};
  EXPECT_EQ(build_error(s), ErrorKind::UnknownReference);
}

TEST(BuildModel, EmptyDomain) {
  ModelSpec s = identity_spec();
  s.variables[0].domain.clear();
  EXPECT_EQ(build_error(s), ErrorKind::EmptyDomain);
}

TEST(BuildModel, BadWeights) {
  ModelSpec s = identity_spec();
  s.units = {"a", "b"};
  s.unit_weights = {Rational(1, 2), Rational(-1, 2)};
  EXPECT_EQ(build_error(s), ErrorKind::InvalidWeight);
  s.unit_weights = {Rational(1, 2), Rational(1, 3)};
  EXPECT_EQ(build_error(s), ErrorKind::UnnormalizedPmf);
}

TEST(BuildModel, RoundedPmfIsRenormalized) {
  ModelSpec s = identity_spec();
  s.noises[0].domain = {Value(0), Value(1), Value(2)};
  const Rational third = parse_rational("0.3333333333333");
  s.noises[0].pmf = {third, third, third};
  s.functions[0].rows.push_back(row({}, 2, 1));
  DiscoModel m = build_model(s);
  for (const auto& p : m.noise(0).pmf) EXPECT_EQ(p, Rational(1, 3));

  s.noises[0].pmf = {Rational(3, 10), Rational(3, 10), Rational(3, 10)};
  EXPECT_EQ(build_error(s), ErrorKind::UnnormalizedPmf);
}

TEST(ValidateModel, LegalModelHasEmptyReport) {
  EXPECT_TRUE(validate_model(xor_spec()).ok());
  EXPECT_TRUE(validate_model(load_model_spec(data_path("table1.model.json"))).ok());
}

TEST(ValidateModel, PmfSummingToNineTenths) {
  ModelSpec s = identity_spec();
  s.noises[0].pmf = {Rational(1, 2), Rational(2, 5)};
  auto report = validate_model(s);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].kind, ErrorKind::UnnormalizedPmf);
  EXPECT_EQ(report.issues[0].element, "E.pmf");
}

TEST(ValidateModel, SharedNoiseViolatesPrivacy) {
  ModelSpec s = xor_spec();
  s.functions[1].noise = "E_T";
  s.noises.pop_back();
  auto report = validate_model(s);
  EXPECT_TRUE(has_issue(report, ErrorKind::PrivacyConstraint));
  EXPECT_EQ(build_error(s), ErrorKind::PrivacyConstraint);
}

TEST(ValidateModel, UnusedNoise) {
  ModelSpec s = identity_spec();
  s.noises.push_back(fair_coin("E_spare"));
  EXPECT_TRUE(has_issue(validate_model(s), ErrorKind::UnusedNoise));
}

TEST(ValidateModel, ReportsEveryIssue) {
  ModelSpec s = xor_spec();
  s.noises[0].pmf = {Rational(1, 2), Rational(1, 4)};
  s.noises.push_back(fair_coin("E_spare"));
  auto report = validate_model(s);
  EXPECT_TRUE(has_issue(report, ErrorKind::UnnormalizedPmf));
  EXPECT_TRUE(has_issue(report, ErrorKind::UnusedNoise));
}

TEST(TopologicalOrder, Chain) {
  EXPECT_EQ(topological_order(chain_spec()), (std::vector<std::string>{"T", "Z", "Y"}));
}

TEST(TopologicalOrder, SingleVariable) {
  EXPECT_EQ(topological_order(identity_spec()), std::vector<std::string>{"Y"});
}

TEST(TopologicalOrder, Diamond) {
  ModelSpec s = chain_spec();
  // declare Y before Z and let Y read both
  std::swap(s.variables[1], s.variables[2]);
  std::swap(s.functions[1], s.functions[2]);
  s.functions[1].parents = {"T", "Z"};
  s.functions[1].rows = {row({0, 0}, 0, 0), row({0, 1}, 0, 1), row({1, 0}, 0, 0), row({1, 1}, 0, 1)};
  DiscoModel m = build_model(s);
  EXPECT_EQ(topological_order(m), (std::vector<std::string>{"T", "Z", "Y"}));
  EXPECT_TRUE(respects_parent_order(m, m.topological_order()));
}

TEST(Model, Ancestry) {
  DiscoModel m = build_model(chain_spec());
  EXPECT_TRUE(is_ancestor(m, 0, 2));
  EXPECT_TRUE(is_ancestor(m, 1, 1));
  EXPECT_FALSE(is_ancestor(m, 2, 0));
}

TEST(Model, LookupErrors) {
  DiscoModel m = build_model(xor_spec());
  EXPECT_THROW(m.require_variable("Q"), Error);
  EXPECT_THROW(m.require_value(0, Value(7)), Error);
  EXPECT_THROW(m.require_unit("nobody"), Error);
  EXPECT_EQ(m.require_value(1, Value(1)), 1u);
}

TEST(Value, IntegersAndSymbols) {
  EXPECT_TRUE(Value::parse("-3").is_integer());
  EXPECT_FALSE(Value::parse("high").is_integer());
  EXPECT_EQ(Value(1), Value("1"));
  std::vector<Value> dom{Value("lo"), Value("hi")};
  EXPECT_EQ(find_value(dom, Value("hi")), 1u);
  EXPECT_FALSE(find_value(dom, Value("mid")));
}

TEST(Rational, Parsing) {
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("0.07"), Rational(7, 100));
  EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
  EXPECT_EQ(to_fraction_string(Rational(6, 8)), "3/4");
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
}

TEST(RoundTrip, FixtureRebuildsIdentically) {
  DiscoModel m = load_model(data_path("table1.model.json"));
  EXPECT_EQ(build_model(to_spec(m)), m);
  EXPECT_EQ(build_model(parse_model_document(write_model_document(to_spec(m)))), m);
}

TEST(RoundTrip, RandomModels) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    ModelSpec s = random_model(rng, {.max_noise_size = 3, .max_units = 3});
    DiscoModel m = build_model(s);
    ASSERT_EQ(build_model(to_spec(m)), m) << "case " << i;
    ASSERT_EQ(build_model(parse_model_document(write_model_document(s))), m) << "case " << i;
  }
}
