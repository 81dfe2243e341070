#include <gtest/gtest.h>

#include "ischema/dynamics.hpp"
#include "support.hpp"

using namespace ischema;
using namespace testing_support;

namespace {

Scenario scenario_text(const std::string& text) {
  auto parsed = parse_scenario(text, "inline.scn");
  if (!parsed.ok()) throw std::runtime_error(joined(parsed.diagnostics));
  return *parsed.value;
}

std::vector<Rational> series(const Trace& tr, const std::string& e, const std::string& p) {
  std::vector<Rational> out;
  for (const auto& s : tr.states) out.push_back(s.at(e, p));
  return out;
}

std::vector<Rational> ints(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

ErrorCode sim_error(const Scenario& sc) {
  try {
    simulate(sc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Gravity, DropLandsOnFloor) {
  Trace tr = simulate(load_scenario("drop.scn"));
  EXPECT_EQ(series(tr, "o", "y"), ints({5, 4, 3, 2, 1, 0, 0}));
  EXPECT_EQ(series(tr, "o", "x"), ints({2, 2, 2, 2, 2, 2, 2}));
  EXPECT_EQ(series(tr, "floor", "y"), ints({0, 0, 0, 0, 0, 0, 0}));
}

TEST(Gravity, ClampsToContact) {
  Scenario sc = load_scenario("drop.scn");
  sc.rules = std::vector<Rule>{gravity_rule(Rational(2))};
  Trace tr = simulate(sc, {}, 5);
  EXPECT_EQ(series(tr, "o", "y"), ints({5, 3, 1, 0, 0}));
}

TEST(Gravity, UsesConfiguredDeltaWhenRuleHasNone) {
  Scenario sc = load_scenario("drop.scn");
  sc.rules = std::vector<Rule>{gravity_rule()};
  SimConfig cfg;
  cfg.delta = Rational(3, 2);
  Trace tr = simulate(sc, cfg, 5);
  EXPECT_EQ(series(tr, "o", "y"), (std::vector<Rational>{5, Rational(7, 2), 2, Rational(1, 2), 0}));
}

TEST(Gravity, RejectsNonPositiveDelta) {
  EXPECT_THROW(gravity_rule(Rational(0)), Error);
  EXPECT_THROW(gravity_rule(Rational(-1)), Error);
}

TEST(Gravity, StackStaysPut) {
  Scenario sc = load_scenario("stack.scn");
  Scenario gen = sc;
  gen.trace.reset();
  gen.rules = std::vector<Rule>{gravity_rule(Rational(1))};
  gen.horizon = 4;
  Trace tr = simulate(gen);
  for (const auto& s : tr.states) {
    EXPECT_EQ(s.values, tr.states[0].values);
  }
}

TEST(Gravity, FallsOntoTable) {
  Scenario sc = scenario_text(R"(scenario FALL
  entity floor : Floor = floor(0)
  entity table : Object = rectangle(0, 1, 4, 2)
  entity box : Object = rectangle(1, 5.5, 1, 1)
  rules
    gravity 1
  horizon 6
end
)");
  Trace tr = simulate(sc);
  // Bottom starts at 5 and the table top is at 2.
  EXPECT_EQ(series(tr, "box", "y"), (std::vector<Rational>{Rational(11, 2), Rational(9, 2), Rational(7, 2),
                                                           Rational(5, 2), Rational(5, 2), Rational(5, 2)}));
}

TEST(Umph, ForceUntilGoal) {
  Trace tr = simulate(load_scenario("push.scn"));
  EXPECT_EQ(series(tr, "o", "x"), ints({0, 1, 2, 3, 3, 3}));
  EXPECT_EQ(series(tr, "o", "y"), ints({0, 0, 0, 0, 0, 0}));
  EXPECT_TRUE(tr.states[0].has_force_on("o"));
  EXPECT_FALSE(tr.states.back().has_force_on("o"));
}

TEST(Inertia, EmptyRuleSetCopiesState) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    Scenario sc;
    sc.name = "R";
    sc.entities = random_entities(rng, 4);
    sc.rules = std::vector<Rule>{};
    sc.horizon = 10;
    Trace tr = simulate(sc);
    ASSERT_EQ(tr.length(), 10u);
    for (std::size_t t = 0; t < tr.length(); ++t) {
      EXPECT_EQ(tr.states[t].values, tr.states[0].values);
      EXPECT_EQ(tr.states[t].time, t);
    }
  }
}

TEST(Effects, DeltasSum) {
  Scenario sc = scenario_text(R"(scenario SUM
  entity o : Object = point(0, 0)
  rules
    rule a when true do o.x += 1
    rule b when true do o.x += 2, o.y := 7
  horizon 3
end
)");
  Trace tr = simulate(sc);
  EXPECT_EQ(series(tr, "o", "x"), ints({0, 3, 6}));
  EXPECT_EQ(series(tr, "o", "y"), ints({0, 7, 7}));
}

TEST(Effects, Conflicts) {
  Scenario agree = scenario_text(R"(scenario AGREE
  entity o : Object = point(0, 0)
  rules
    rule a when true do o.x := 4
    rule b when true do o.x := 4
  horizon 2
end
)");
  EXPECT_EQ(series(simulate(agree), "o", "x"), ints({0, 4}));

  Scenario disagree = scenario_text(R"(scenario DISAGREE
  entity o : Object = point(0, 0)
  rules
    rule a when true do o.x := 4
    rule b when true do o.x := 5
  horizon 2
end
)");
  EXPECT_EQ(sim_error(disagree), ErrorCode::ConflictingEffects);

  Scenario mixed = scenario_text(R"(scenario MIXED
  entity o : Object = point(0, 0)
  rules
    rule a when true do o.x := 4
    rule b when true do o.x += 1
  horizon 2
end
)");
  EXPECT_EQ(sim_error(mixed), ErrorCode::ConflictingEffects);
}

TEST(Strata, NegativeCycleIsRejected) {
  Scenario sc = scenario_text(R"(scenario CYCLE
  entity p : Object = point(0, 0)
  entity q : Object = point(0, 0)
  rules
    rule a when not (p.x > 0) do q.x := 1
    rule b when not (q.x > 0) do p.x := 1
  horizon 2
end
)");
  EXPECT_EQ(sim_error(sc), ErrorCode::UnstratifiableRuleSet);
}

TEST(Strata, LaterStratumSeesEarlierEffects) {
  Scenario sc = scenario_text(R"(scenario LAYERS
  entity p : Object = point(0, 0)
  entity q : Object = point(0, 0)
  rules
    rule b when not (p.x > 0) do q.x := 1
    rule a when true do p.x := 1
  horizon 2
end
)");
  auto strata = stratify(*sc.rules);
  ASSERT_EQ(strata.size(), 2u);
  EXPECT_EQ(strata[0], std::vector<std::size_t>{1});
  EXPECT_EQ(strata[1], std::vector<std::size_t>{0});
  Trace tr = simulate(sc);
  // a fires first, so b's negative condition already fails.
  EXPECT_EQ(series(tr, "q", "x"), ints({0, 0}));
  EXPECT_EQ(series(tr, "p", "x"), ints({0, 1}));
}

TEST(Strata, TemporalConditionRejected) {
  Rule r;
  r.name = "bad";
  r.condition = fml::eventually(fml::truth(true));
  EXPECT_THROW(stratify({r}), Error);
}

TEST(Forces, ActiveForceMovesEveryStep) {
  Scenario sc = scenario_text(R"(scenario DRIFT
  entity o : Object = circle(0, 0, 1)
  force wind on o = (0.5, -1) passive
  rules
  horizon 4
end
)");
  Trace tr = simulate(sc);
  EXPECT_EQ(series(tr, "o", "x"), (std::vector<Rational>{0, Rational(1, 2), 1, Rational(3, 2)}));
  EXPECT_EQ(series(tr, "o", "y"), ints({0, -1, -2, -3}));
  EXPECT_EQ(series(tr, "o", "r"), ints({1, 1, 1, 1}));
}
