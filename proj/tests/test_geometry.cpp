#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ischema/geometry.hpp"
#include "support.hpp"

using namespace ischema;
using testing_support::Rng;

namespace {

Shape point(Rational x, Rational y) {
  Shape s;
  s.kind = ShapeKind::Point;
  s.x = x;
  s.y = y;
  return s;
}

Shape circle(Rational x, Rational y, Rational r) {
  Shape s = point(x, y);
  s.kind = ShapeKind::Circle;
  s.r = r;
  return s;
}

Shape rect(Rational x, Rational y, Rational w, Rational h) {
  Shape s = point(x, y);
  s.kind = ShapeKind::Rectangle;
  s.w = w;
  s.h = h;
  return s;
}

Shape floor_at(Rational y) {
  Shape s;
  s.kind = ShapeKind::Floor;
  s.y = y;
  return s;
}

World fig1_world() {
  auto sc = testing_support::load_scenario("fig1.scn");
  return sc.world();
}

}  // namespace

TEST(Fig1, InsideByPolynomialConstraint) {
  auto sc = testing_support::load_scenario("fig1.scn");
  World w = sc.world();
  const State& s = sc.trace->states.at(0);
  // (x_a - x_c)^2 + (y_a - y_c)^2 evaluated from the parameters.
  auto lhs = num::binary(ArithOp::Add, num::pow(num::binary(ArithOp::Sub, num::param("a", "x"), num::param("c", "x")), 2),
                         num::pow(num::binary(ArithOp::Sub, num::param("a", "y"), num::param("c", "y")), 2));
  Number v = eval_num(lhs, w, s);
  ASSERT_TRUE(v.exact());
  EXPECT_EQ(v.rational(), Rational(1));
  Number r2 = eval_num(num::pow(num::param("c", "r"), 2), w, s);
  EXPECT_EQ(r2.rational(), Rational(9));

  std::vector<std::string> ac{"a", "c"}, bc{"b", "c"}, ca{"c", "a"};
  Tolerances exact{Rational(0)};
  EXPECT_TRUE(eval_relation("inside", ac, {}, w, s, exact));
  EXPECT_TRUE(eval_relation("inside", bc, {}, w, s, exact));
  EXPECT_FALSE(eval_relation("inside", ca, {}, w, s, exact));
}

TEST(Fig1, DistanceIsCenterToCenter) {
  World w = fig1_world();
  auto sc = testing_support::load_scenario("fig1.scn");
  const State& s = sc.trace->states.at(0);
  Number d = distance(w, s, "a", "c");
  ASSERT_TRUE(d.exact());
  EXPECT_EQ(d.rational(), Rational(1));
  EXPECT_EQ(distance(w, s, "a", "a").rational(), Rational(0));
  EXPECT_EQ(eval_num(num::constant(0), w, s).rational(), Rational(0));
}

TEST(Geometry, PointInCircleMatchesClosedForm) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    Shape p = point(rng.rational(-4, 4, 4), rng.rational(-4, 4, 4));
    Shape c = circle(rng.rational(-2, 2), rng.rational(-2, 2), rng.rational(1, 3));
    Rational dx = p.x - c.x, dy = p.y - c.y;
    EXPECT_EQ(inside(p, c), dx * dx + dy * dy < c.r * c.r);
    EXPECT_EQ(part_of(p, c), dx * dx + dy * dy <= c.r * c.r);
  }
}

TEST(Geometry, CircleInsideCircleAgreesWithBoundarySampling) {
  Rng rng(12);
  int positives = 0;
  for (int i = 0; i < 1000; ++i) {
    Shape a = circle(rng.rational(-2, 2), rng.rational(-2, 2), rng.rational(1, 2));
    Shape b = circle(rng.rational(-2, 2), rng.rational(-2, 2), rng.rational(1, 4));
    // Sample the boundary of a; every sample must lie in b when inside holds,
    // and some sample must lie strictly outside b when the radii allow it but
    // inside fails.
    double worst = -1e9;
    for (int k = 0; k < 720; ++k) {
      double t = 2 * std::numbers::pi * k / 720;
      double x = a.x.get_d() + a.r.get_d() * std::cos(t) - b.x.get_d();
      double y = a.y.get_d() + a.r.get_d() * std::sin(t) - b.y.get_d();
      worst = std::max(worst, std::sqrt(x * x + y * y) - b.r.get_d());
    }
    if (inside(a, b)) {
      ++positives;
      EXPECT_LE(worst, 1e-9);
    } else if (a.r < b.r) {
      EXPECT_GT(worst, -1e-9);
    }
  }
  EXPECT_GT(positives, 20);
}

TEST(Geometry, RectangleContainment) {
  EXPECT_TRUE(inside(rect(0, 0, 1, 1), rect(0, 0, 4, 4)));
  EXPECT_FALSE(inside(rect(0, 0, 4, 4), rect(0, 0, 4, 4)));
  EXPECT_TRUE(part_of(rect(0, 0, 4, 4), rect(0, 0, 4, 4)));
  EXPECT_TRUE(inside(rect(0, 0, 2, 2), circle(0, 0, 2)));  // corners at distance sqrt 2
  EXPECT_FALSE(inside(rect(0, 0, 4, 4), circle(0, 0, 2)));
  EXPECT_FALSE(inside(point(0, 0), point(0, 0)));
}

TEST(Geometry, SquaredDistanceSymmetricAndTriangle) {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    Shape a = point(rng.rational(-5, 5), rng.rational(-5, 5));
    Shape b = circle(rng.rational(-5, 5), rng.rational(-5, 5), 1);
    Shape c = rect(rng.rational(-5, 5), rng.rational(-5, 5), 1, 2);
    EXPECT_EQ(squared_distance(a, b), squared_distance(b, a));
    double ab = std::sqrt(squared_distance(a, b).get_d());
    double bc = std::sqrt(squared_distance(b, c).get_d());
    double ac = std::sqrt(squared_distance(a, c).get_d());
    EXPECT_LE(ac, ab + bc + 1e-9);
  }
}

TEST(Geometry, FloorDistanceIsVertical) {
  EXPECT_EQ(squared_distance(point(7, 3), floor_at(1)), Rational(4));
  EXPECT_EQ(squared_distance(floor_at(1), point(-7, 3)), Rational(4));
}

TEST(Geometry, ContactAndOn) {
  Tolerances tol;
  Tolerances exact{Rational(0)};
  EXPECT_TRUE(contact(circle(0, 0, 1), circle(2, 0, 1), exact));
  EXPECT_FALSE(contact(circle(0, 0, 1), circle(2, 0, Rational(9, 10)), exact));
  EXPECT_TRUE(contact(rect(0, 1, 4, 2), floor_at(0), exact));
  EXPECT_TRUE(on(rect(0, Rational(5, 2), 1, 1), rect(0, 1, 4, 2), tol));
  EXPECT_FALSE(on(rect(0, 1, 4, 2), rect(0, Rational(5, 2), 1, 1), tol));
  EXPECT_FALSE(on(floor_at(0), floor_at(0), tol));
  EXPECT_TRUE(on(point(3, 0), floor_at(0), tol));
  EXPECT_FALSE(on(point(3, Rational(1, 10)), floor_at(0), tol));
  // Coincidence tolerance widens contact.
  EXPECT_TRUE(on(point(3, Rational(1, 10)), floor_at(0), Tolerances{Rational(1, 5)}));
}

TEST(Geometry, AreasCompareExactly) {
  // A unit circle (pi) is larger than a 3 x 1 rectangle and smaller than 2 x 2.
  EXPECT_EQ(compare_areas(area(circle(0, 0, 1)), area(rect(0, 0, 3, 1))), 1);
  EXPECT_EQ(compare_areas(area(circle(0, 0, 1)), area(rect(0, 0, 2, 2))), -1);
  EXPECT_EQ(compare_areas(area(rect(0, 0, 2, 3)), area(rect(0, 0, 3, 2))), 0);
  EXPECT_THROW(area(floor_at(0)), Error);
}

TEST(Geometry, CloseToThreshold) {
  EXPECT_TRUE(close_to(point(0, 0), point(3, 4), Number(Rational(5))));
  EXPECT_FALSE(close_to(point(0, 0), point(3, 4), Number(Rational(49, 10))));
  EXPECT_FALSE(close_to(point(0, 0), point(0, 0), Number(Rational(-1))));
}

TEST(Geometry, AngularPositionAndMeasure) {
  auto sc = testing_support::load_scenario("solar.scn");
  World w = sc.world();
  const auto& st = sc.trace->states;
  double prev = angular_position(w, st[0], "planet", "sun");
  int wraps = 0;
  for (std::size_t t = 1; t < st.size(); ++t) {
    double cur = angular_position(w, st[t], "planet", "sun");
    if (cur < prev) ++wraps;
    prev = cur;
  }
  EXPECT_LE(wraps, 1);
  EXPECT_NEAR(measure(w, st[0], "sun").to_double(), std::numbers::pi, 1e-9);
}

TEST(Geometry, SupportHeight) {
  auto sc = testing_support::load_scenario("stack.scn");
  World w = sc.world();
  const State& s = sc.trace->states[0];
  EXPECT_EQ(*support_height(w, s, "box"), Rational(2));
  EXPECT_EQ(*support_height(w, s, "table"), Rational(0));
}

TEST(Geometry, RelationErrors) {
  World w = fig1_world();
  auto sc = testing_support::load_scenario("fig1.scn");
  const State& s = sc.trace->states[0];
  std::vector<std::string> args{"a", "c"};
  EXPECT_THROW(eval_relation("nope", args, {}, w, s, {}), Error);
  std::vector<std::string> ghost{"a", "ghost"};
  EXPECT_THROW(eval_relation("inside", ghost, {}, w, s, {}), Error);
  try {
    eval_num(num::param("a", "r"), w, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownParameter);
  }
}

TEST(Number, MixedExactness) {
  Number a(Rational(1, 2));
  Number b = Number::real(0.25);
  EXPECT_TRUE((a + a).exact());
  EXPECT_FALSE((a + b).exact());
  EXPECT_TRUE(compare(a + b, CmpOp::Eq, Number(Rational(3, 4)), Tolerances{}));
  EXPECT_TRUE(compare(power(a, 3), CmpOp::Eq, Number(Rational(1, 8)), Tolerances{Rational(0)}));
}
