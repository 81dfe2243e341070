#include <gtest/gtest.h>

#include "ischema/enumerate.hpp"
#include "support.hpp"

using namespace ischema;
using namespace testing_support;

namespace {

Scenario with_radius(Rational r) {
  Scenario sc = load_scenario("grid_containment.scn");
  for (auto& e : sc.entities) {
    if (e.id != "c") continue;
    for (auto& p : e.params) {
      if (p.name == "r") p.value = r;
    }
  }
  sc.trace = Trace{{initial_state(sc.entities, sc.forces)}};
  return sc;
}

std::uint64_t count_for(Rational r) {
  Theory th = load_theory(source_dir() / "scenarios" / "inside.ist");
  Environment env = library().environment(th);
  GridSpec grid = parse_grid("0:2,0:2");
  grid.free = {"o"};
  return count_models(th, env, with_radius(r), grid, {{"o", "o"}, {"c", "c"}});
}

// Grid points of [0,2]^2 strictly inside the circle of radius r at (1,1).
std::uint64_t hand_count(const Rational& r) {
  std::uint64_t n = 0;
  for (int x = 0; x <= 2; ++x) {
    for (int y = 0; y <= 2; ++y) {
      if (Rational((x - 1) * (x - 1) + (y - 1) * (y - 1)) < r * r) ++n;
    }
  }
  return n;
}

}  // namespace

TEST(Grid, Parse) {
  GridSpec g = parse_grid("0:2,-1:1");
  EXPECT_EQ(g.x0, Rational(0));
  EXPECT_EQ(g.x1, Rational(2));
  EXPECT_EQ(g.y0, Rational(-1));
  EXPECT_EQ(g.step, Rational(1));
  EXPECT_EQ(g.points(), 9u);
  GridSpec h = parse_grid("0:1,0:1,0.5");
  EXPECT_EQ(h.step, Rational(1, 2));
  EXPECT_EQ(h.points(), 9u);
  EXPECT_THROW(parse_grid("0:2"), Error);
  EXPECT_THROW(parse_grid("2:0,0:2"), Error);
  EXPECT_THROW(parse_grid("0:2,0:2,0"), Error);
}

TEST(Enumerate, ContainmentCountsMatchHandCount) {
  EXPECT_EQ(hand_count(Rational(6, 5)), 5u);
  EXPECT_EQ(hand_count(Rational(3, 2)), 9u);
  for (Rational r : {Rational(1), Rational(6, 5), Rational(3, 2), Rational(2)}) {
    EXPECT_EQ(count_for(r), hand_count(r)) << r.get_str();
  }
  EXPECT_EQ(count_for(Rational(6, 5)), 5u);
  EXPECT_EQ(count_for(Rational(3, 2)), 9u);
}

TEST(Enumerate, MonotoneInRadius) {
  std::uint64_t prev = 0;
  for (Rational r : {Rational(1), Rational(6, 5), Rational(3, 2), Rational(2)}) {
    std::uint64_t n = count_for(r);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(Enumerate, ModelsInLexicographicOrder) {
  Theory th = load_theory(source_dir() / "scenarios" / "inside.ist");
  Environment env = library().environment(th);
  GridSpec grid = parse_grid("0:2,0:2");
  grid.free = {"o"};
  auto models = enumerate_models(th, env, with_radius(Rational(6, 5)), grid, {{"o", "o"}, {"c", "c"}});
  ASSERT_EQ(models.size(), 5u);
  std::vector<std::pair<Rational, Rational>> pts;
  for (const auto& m : models) pts.emplace_back(m.states[0].at("o", "x"), m.states[0].at("o", "y"));
  std::vector<std::pair<Rational, Rational>> want{{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}};
  EXPECT_EQ(pts, want);
  // Non-free entities keep their values.
  for (const auto& m : models) EXPECT_EQ(m.states[0].at("c", "r"), Rational(6, 5));
}

TEST(Enumerate, TemporalTheoryOverSeveralInstants) {
  // eventually inside(o, c) over two instants: 81 traces minus those where o
  // is outside at both instants (4 * 4).
  Theory th = load_theory(source_dir() / "scenarios" / "inside.ist");
  th.axioms = {fml::eventually(fml::atom("inside", {"o", "c"}))};
  Environment env = library().environment(th);
  GridSpec grid = parse_grid("0:2,0:2");
  grid.free = {"o"};
  grid.horizon = 2;
  EXPECT_EQ(count_models(th, env, with_radius(Rational(6, 5)), grid, {{"o", "o"}, {"c", "c"}}), 81u - 16u);
}

TEST(Enumerate, SearchSpaceCap) {
  Scenario sc = with_radius(Rational(1));
  GridSpec grid = parse_grid("0:2,0:2");
  grid.free = {"o"};
  grid.horizon = 3;
  EXPECT_EQ(search_space(sc, grid), 729u);
  grid.cap = 700;
  try {
    search_space(sc, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SearchSpaceTooLarge);
  }
  EXPECT_EQ(default_free_entities(sc), std::vector<std::string>{"o"});
}
