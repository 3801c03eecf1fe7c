#include <gtest/gtest.h>

#include "builders.hpp"
#include "disco/model_io.hpp"
#include "disco/worlds.hpp"
#include "generators.hpp"

using namespace disco;
using namespace disco::testing;

namespace {

DiscoModel coin_model() { return build_model(identity_spec()); }

std::map<std::vector<ValueIndex>, Rational> as_map(const std::vector<JointEntry>& table) {
  std::map<std::vector<ValueIndex>, Rational> out;
  for (const auto& e : table) {
    if (e.mass != 0) out[e.values] = e.mass;
  }
  return out;
}

World do_world(const DiscoModel& m, std::vector<Binding> b, std::size_t id) { return make_world(m, b, id); }

}  // namespace

TEST(Intervention, SurrogateDoT) {
  DiscoModel m = load_model(data_path("example2_surrogate.model.json"));
  World w = do_world(m, {{"T", Value(1)}}, 1);
  EXPECT_FALSE(w.is_factual());
  const VarIndex t = m.require_variable("T");
  EXPECT_EQ(w.intervention.forced(t), m.require_value(t, Value(1)));
  EXPECT_FALSE(w.intervention.forced(m.require_variable("Y")));
}

TEST(Intervention, EmptyIsFactual) {
  DiscoModel m = coin_model();
  EXPECT_TRUE(do_world(m, {}, 0).is_factual());
  EXPECT_TRUE(factual_world().is_factual());
}

TEST(Intervention, SetSemantics) {
  DiscoModel m = build_model(xor_spec());
  Intervention a = do_world(m, {{"Y", Value(1)}, {"T", Value(0)}}, 0).intervention;
  Intervention b = do_world(m, {{"T", Value(0)}, {"Y", Value(1)}}, 0).intervention;
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.assignments().size(), 2u);
  EXPECT_EQ(a.forced(1), 1u);
}

TEST(Intervention, Errors) {
  DiscoModel m = build_model(xor_spec());
  std::vector<Binding> unknown{{"Q", Value(1)}};
  std::vector<Binding> out_of_domain{{"T", Value(5)}};
  std::vector<Binding> twice{{"T", Value(0)}, {"T", Value(1)}};
  auto kind_of = [&](const std::vector<Binding>& b) {
    try {
      make_intervention(m, b);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind_of(unknown), ErrorKind::UnknownVariable);
  EXPECT_EQ(kind_of(out_of_domain), ErrorKind::OutOfDomainValue);
  EXPECT_EQ(kind_of(twice), ErrorKind::DuplicateName);
}

TEST(Coupling, IndependentFairCoin) {
  DiscoModel m = coin_model();
  Coupling c = make_coupling(m, CouplingKind::Independent, {factual_world(0), factual_world(1)});
  auto j = as_map(joint_table(c, m, 0));
  ASSERT_EQ(j.size(), 4u);
  for (const auto& [k, p] : j) EXPECT_EQ(p, Rational(1, 4));
}

TEST(Coupling, SharedFairCoin) {
  DiscoModel m = coin_model();
  Coupling c = make_coupling(m, CouplingKind::Shared, {factual_world(0), factual_world(1)});
  auto j = as_map(joint_table(c, m, 0));
  std::map<std::vector<ValueIndex>, Rational> expected{{{0, 0}, Rational(1, 2)}, {{1, 1}, Rational(1, 2)}};
  EXPECT_EQ(j, expected);
}

TEST(Coupling, ExplicitMismatch) {
  ModelSpec s = identity_spec();
  s.noises[0].pmf = {Rational(3, 5), Rational(2, 5)};
  DiscoModel m = build_model(s);
  JointSpec joint{{"E",
                   {{},
                    {{{Value(0), Value(0)}, Rational(1, 2)},
                     {{Value(0), Value(1)}, Rational(0)},
                     {{Value(1), Value(0)}, Rational(0)},
                     {{Value(1), Value(1)}, Rational(1, 2)}}}}};
  std::vector<World> worlds{factual_world(0), factual_world(1)};
  try {
    make_coupling(m, CouplingKind::ExplicitJoint, worlds, joint);
    FAIL() << "mismatch accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MarginalMismatch);
  }
  Coupling raw = assemble_coupling(m, CouplingKind::ExplicitJoint, worlds, joint);
  MarginalReport r = coupling_marginals_ok(raw, m);
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.deviations.empty());
  bool found = false;
  for (const auto& d : r.deviations) {
    if (d.world_id == 0 && d.value == Value(0)) {
      EXPECT_EQ(d.expected, Rational(3, 5));
      EXPECT_EQ(d.actual, Rational(1, 2));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Coupling, MarginalsOkForStandardKinds) {
  DiscoModel m = load_model(data_path("table1.model.json"));
  for (auto kind : {CouplingKind::Independent, CouplingKind::Shared}) {
    Coupling c = make_coupling(m, kind, {factual_world(0), do_world(m, {{"T", Value(1)}}, 1),
                                         do_world(m, {{"T", Value(0)}}, 2)});
    EXPECT_TRUE(coupling_marginals_ok(c, m).ok);
  }
}

TEST(Coupling, ExplicitOverSubsetOfWorlds) {
  DiscoModel m = coin_model();
  JointSpec joint{{"E", {{0, 2}, {{{Value(0), Value(0)}, Rational(1, 2)}, {{Value(1), Value(1)}, Rational(1, 2)}}}}};
  Coupling c = make_coupling(m, CouplingKind::ExplicitJoint, {factual_world(0), factual_world(1), factual_world(2)},
                             joint);
  auto j = as_map(joint_table(c, m, 0));
  // worlds 0 and 2 agree, world 1 is free
  EXPECT_EQ(j.size(), 4u);
  for (const auto& [k, p] : j) {
    EXPECT_EQ(k[0], k[2]);
    EXPECT_EQ(p, Rational(1, 4));
  }
}

TEST(Coupling, StructuralErrors) {
  DiscoModel m = coin_model();
  auto kind_of = [&](CouplingKind kind, std::vector<World> worlds, const JointSpec& joint) {
    try {
      assemble_coupling(m, kind, std::move(worlds), joint);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind_of(CouplingKind::Independent, {factual_world(0), factual_world(0)}, {}), ErrorKind::DuplicateName);
  JointSpec bad_arity{{"E", {{}, {{{Value(0)}, Rational(1)}}}}};
  EXPECT_EQ(kind_of(CouplingKind::ExplicitJoint, {factual_world(0), factual_world(1)}, bad_arity),
            ErrorKind::OutOfDomainValue);
  JointSpec bad_world{{"E", {{0, 5}, {{{Value(0), Value(0)}, Rational(1)}}}}};
  EXPECT_EQ(kind_of(CouplingKind::ExplicitJoint, {factual_world(0), factual_world(1)}, bad_world),
            ErrorKind::UncoveredWorld);
  JointSpec bad_noise{{"E_nope", {{}, {{{Value(0), Value(0)}, Rational(1)}}}}};
  EXPECT_EQ(kind_of(CouplingKind::ExplicitJoint, {factual_world(0), factual_world(1)}, bad_noise),
            ErrorKind::UnknownReference);
}

TEST(Coupling, AppendIndependentWorld) {
  DiscoModel m = coin_model();
  Coupling c = make_coupling(m, CouplingKind::Shared, {factual_world(0), factual_world(1)});
  EXPECT_EQ(c.next_world_id(), 2u);
  Coupling d = c.with_independent_world(factual_world(2));
  EXPECT_EQ(d.worlds().size(), 3u);
  EXPECT_TRUE(coupling_marginals_ok(d, m).ok);
  auto j = as_map(joint_table(d, m, 0));
  EXPECT_EQ(j.size(), 4u);
  EXPECT_THROW(c.with_independent_world(factual_world(1)), Error);
}

TEST(Coupling, IdenticalInterventionsStayDistinct) {
  DiscoModel m = coin_model();
  Coupling c = make_coupling(m, CouplingKind::Independent, {factual_world(0), factual_world(1)});
  // two factual copies: independent noise, so P(Y0=1, Y1=1) = 1/4 in the joint
  EXPECT_EQ(as_map(joint_table(c, m, 0)).at({1, 1}), Rational(1, 4));
}

TEST(Event, ConjoinAndResolve) {
  DiscoModel m = build_model(xor_spec());
  std::vector<Binding> b{{"Y", Value(1)}};
  CrossWorldEvent e = make_event(m, 3, b);
  ASSERT_EQ(e.constraints.size(), 1u);
  EXPECT_EQ(e.constraints[0].world_id, 3u);
  CrossWorldEvent f;
  f.add(1, 0, 0);
  EXPECT_EQ(e.conjoin(f).constraints.size(), 2u);
}
