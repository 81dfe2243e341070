#include <gtest/gtest.h>

#include "ischema/model.hpp"
#include "ischema/scenario.hpp"
#include "support.hpp"

using namespace ischema;

TEST(Rational, ParsesDecimalsAndFractions) {
  EXPECT_EQ(*parse_rational("4"), Rational(4));
  EXPECT_EQ(*parse_rational("-4.5"), Rational(-9, 2));
  EXPECT_EQ(*parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(*parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_EQ(*parse_rational("6/4"), Rational(3, 2));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("abc"));
  EXPECT_FALSE(parse_rational(""));
  EXPECT_FALSE(parse_rational("1.2.3"));
}

TEST(Rational, FormatIsCanonical) {
  EXPECT_EQ(format_rational(Rational(9, 2)), "4.5");
  EXPECT_EQ(format_rational(Rational(-1, 8)), "-0.125");
  EXPECT_EQ(format_rational(Rational(1, 3)), "1/3");
  EXPECT_EQ(format_rational(Rational(6, 4)), format_rational(Rational(3, 2)));
  EXPECT_EQ(format_rational(Rational(0)), "0");
  for (int num = -50; num <= 50; ++num) {
    for (int den = 1; den <= 12; ++den) {
      Rational q(num, den);
      q.canonicalize();
      EXPECT_EQ(*parse_rational(format_rational(q)), q) << num << "/" << den;
    }
  }
}

TEST(Rational, ExactSqrt) {
  EXPECT_EQ(*exact_sqrt(Rational(9, 4)), Rational(3, 2));
  EXPECT_FALSE(exact_sqrt(Rational(2)));
}

TEST(Sorts, BuiltinHierarchy) {
  SortHierarchy h;
  EXPECT_TRUE(h.subsort_of("Object", "Entity"));
  EXPECT_TRUE(h.subsort_of("Entity", "Entity"));
  EXPECT_FALSE(h.subsort_of("Entity", "Object"));
  EXPECT_THROW(h.subsort_of("Nope", "Entity"), Error);
}

TEST(Sorts, UserSortsInAnyOrder) {
  auto h = build_hierarchy({Sort{"Cup", "Bowl"}, Sort{"Bowl", "Container"}});
  EXPECT_TRUE(h.subsort_of("Cup", "Container"));
  EXPECT_TRUE(h.subsort_of("Cup", "Entity"));
  EXPECT_TRUE(h.admits("Cup", ShapeKind::Circle));
  EXPECT_FALSE(h.admits("Cup", ShapeKind::Point));
  try {
    build_hierarchy({Sort{"A", "B"}, Sort{"B", "A"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SortCycle);
  }
  try {
    build_hierarchy({Sort{"A", "Missing"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSort);
  }
}

TEST(Sorts, FreeFunctionMatchesClass) {
  std::vector<Sort> user{Sort{"Mug", "Container"}};
  EXPECT_TRUE(subsort_of("Mug", "Entity", user));
  EXPECT_FALSE(subsort_of("Mug", "Object", user));
}

namespace {

ErrorCode entity_error(const std::vector<EntityDecl>& es) {
  try {
    validate_entities(es, SortHierarchy{});
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;  // sentinel: no error
}

}  // namespace

TEST(Entities, Validation) {
  auto a = make_entity("a", "Object", ShapeKind::Point, {4, 5});
  auto c = make_entity("c", "Container", ShapeKind::Circle, {5, 5, 3});
  EXPECT_NO_THROW(validate_entities({a, c}, SortHierarchy{}));
  EXPECT_EQ(entity_error({a, a}), ErrorCode::DuplicateEntity);
  EXPECT_EQ(entity_error({make_entity("p", "Container", ShapeKind::Point, {0, 0})}), ErrorCode::BadShapeForSort);
  EXPECT_EQ(entity_error({make_entity("c", "Container", ShapeKind::Circle, {0, 0, -1})}),
            ErrorCode::NegativeExtent);
  EXPECT_EQ(entity_error({make_entity("c", "Bogus", ShapeKind::Circle, {0, 0, 1})}), ErrorCode::UnknownSort);
}

TEST(States, InitialStateAndTraceValidation) {
  std::vector<EntityDecl> es{make_entity("a", "Object", ShapeKind::Point, {4, 5})};
  State s0 = initial_state(es);
  EXPECT_EQ(s0.at("a", "x"), Rational(4));
  EXPECT_EQ(s0.at("a", "y"), Rational(5));
  EXPECT_FALSE(s0.has("a", "r"));

  Trace ok{{s0}};
  EXPECT_NO_THROW(validate_trace(ok, es));

  Trace empty;
  EXPECT_THROW(validate_trace(empty, es), Error);

  State s1 = s0;
  s1.time = 2;
  EXPECT_THROW(validate_trace(Trace{{s0, s1}}, es), Error);

  State partial = s0;
  partial.time = 1;
  partial.values.erase({"a", "y"});
  EXPECT_THROW(validate_trace(Trace{{s0, partial}}, es), Error);

  State forced = s0;
  forced.forces.insert(ForceFluent{"f", "ghost", 1, 0, ForceMode::Active});
  EXPECT_THROW(validate_trace(Trace{{forced}}, es), Error);
}

TEST(Scenario, TranslateMovesEveryPosition) {
  auto sc = testing_support::load_scenario("stack.scn");
  auto moved = translate(sc, Rational(17), Rational(-3));
  const auto& floor = find_entity(moved.entities, "floor");
  EXPECT_EQ(*floor.find("y"), Rational(-3));
  const auto& box = find_entity(moved.entities, "box");
  EXPECT_EQ(*box.find("x"), Rational(17));
  EXPECT_EQ(*box.find("y"), Rational(5, 2) - 3);
  EXPECT_EQ(*box.find("w"), Rational(1));
  for (const auto& st : moved.trace->states) EXPECT_EQ(st.at("box", "x"), Rational(17));
}

TEST(Scenario, ExactlyOneOfTraceOrRules) {
  auto sc = testing_support::load_scenario("fig1.scn");
  EXPECT_NO_THROW(declare_scenario(sc));
  Scenario both = sc;
  both.rules = std::vector<Rule>{};
  both.horizon = 3;
  EXPECT_THROW(declare_scenario(both), Error);
  Scenario neither = sc;
  neither.trace.reset();
  EXPECT_THROW(declare_scenario(neither), Error);
}
