#include <gtest/gtest.h>

#include <set>

#include "ischema/library.hpp"
#include "support.hpp"

using namespace ischema;
using namespace testing_support;

namespace {

std::vector<std::string> texts(const std::vector<Classification>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.binding.to_text());
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool any_schema(const std::vector<Classification>& cs, const std::string& schema) {
  return std::any_of(cs.begin(), cs.end(), [&](const Classification& c) { return c.binding.schema == schema; });
}

// Every assignment of entities to roles, filtered by sort and distinctness,
// checked with the reference evaluator. Independent of candidate_bindings.
std::set<std::string> brute_force(const Scenario& sc, const Trace& trace) {
  std::set<std::string> out;
  for (const auto& name : library().schema_names()) {
    const Theory& th = library().schema(name);
    World world = world_for(library(), th, sc);
    Environment env = library().environment(th);
    std::size_t n = th.roles.size();
    std::size_t m = sc.entities.size();
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      RoleBinding b;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const auto& e = sc.entities[idx[i]];
        ok = world.sorts().subsort_of(e.sort, th.roles[i].sort);
        for (std::size_t j = 0; j < i && ok; ++j) {
          if (idx[i] == idx[j] && !th.may_alias(th.roles[i].role, th.roles[j].role)) ok = false;
        }
        b[th.roles[i].role] = e.id;
      }
      if (ok) {
        try {
          if (check_theory(th, env, world, trace, b, {}, Evaluator::Reference).satisfied()) {
            std::string text = name + "{";
            for (std::size_t i = 0; i < n; ++i) text += (i ? ", " : "") + th.roles[i].role + "->" + b[th.roles[i].role];
            out.insert(text + "}");
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::UnknownParameter) throw;
        }
      }
      std::size_t k = 0;
      while (k < n && ++idx[k] == m) idx[k++] = 0;
      if (k == n) break;
    }
  }
  return out;
}

Scenario rename(const Scenario& sc, const std::map<std::string, std::string>& names) {
  Scenario out = sc;
  for (auto& e : out.entities) e.id = names.at(e.id);
  Trace tr;
  for (const auto& s : sc.trace->states) {
    State r;
    r.time = s.time;
    for (const auto& [key, v] : s.values) r.values[{names.at(key.first), key.second}] = v;
    for (auto f : s.forces) {
      f.target = names.at(f.target);
      r.forces.insert(f);
    }
    tr.states.push_back(r);
  }
  out.trace = tr;
  ForceSet forces;
  for (auto f : sc.forces) {
    f.target = names.at(f.target);
    forces.insert(f);
  }
  out.forces = forces;
  return out;
}

const char* kGoldens[] = {"fig1.scn", "ball_into_cup.scn", "path.scn", "stack.scn", "solar.scn", "atom.scn"};

}  // namespace

TEST(Catalog, CoversAllPrimitives) {
  const auto& cat = primitive_catalog();
  EXPECT_EQ(cat.size(), 27u);
  std::set<std::string> names;
  for (const auto& p : cat) names.insert(p.name);
  EXPECT_EQ(names.size(), cat.size());
  for (const char* n : {"OBJECT", "CONTAINER", "PATH", "REGION", "DOWN", "UP", "LOCATION", "START_PATH", "END_PATH",
                        "CONTACT", "CONTAINED", "SMALLER", "LARGER", "PART_OF", "PERMANENCE", "LINK", "OPEN",
                        "CLOSED", "EMPTY", "OCCUPIED", "FULL", "MOTION", "AT_REST", "ANIMATE_MOTION",
                        "INANIMATE_MOTION", "active-UMPH", "passive-UMPH"}) {
    EXPECT_NE(find_primitive(n), nullptr) << n;
  }
  EXPECT_EQ(find_primitive("NOPE"), nullptr);
}

TEST(Catalog, TargetsExist) {
  Environment env = library().environment(Theory{});
  SortHierarchy sorts = build_hierarchy(library().prelude().sorts);
  for (const auto& p : primitive_catalog()) {
    SCOPED_TRACE(p.name);
    switch (p.realization) {
      case Realization::Sort:
        EXPECT_TRUE(sorts.contains(p.target));
        break;
      case Realization::BuiltinRelation:
        EXPECT_TRUE(is_builtin_relation(p.target));
        break;
      case Realization::Macro: {
        const RelationDef* def = env.relation(p.target);
        ASSERT_NE(def, nullptr);
        EXPECT_TRUE(def->defined());
        break;
      }
      default:
        EXPECT_FALSE(p.target.empty());
    }
  }
}

TEST(Library, LoadsSchemas) {
  auto names = library().schema_names();
  for (const char* n : {"SOURCE_PATH_GOAL", "OBJECT_INTO_CONTAINER", "SUPPORT", "LINK", "REVOLUTION", "MOTION",
                        "AT_REST"}) {
    EXPECT_TRUE(library().has_schema(n)) << n;
  }
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  try {
    library().schema("NOPE");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSchema);
  }
}

TEST(Library, SourcePathGoalGenerator) {
  EXPECT_TRUE(equal(source_path_goal(3), library().schema("SOURCE_PATH_GOAL")));
  Theory four = source_path_goal(4);
  EXPECT_EQ(four.roles.size(), 5u);
  EXPECT_THROW(source_path_goal(1), Error);
}

TEST(Classify, Goldens) {
  auto cup = load_scenario("ball_into_cup.scn");
  auto r = texts(classify(library(), cup, *cup.trace));
  EXPECT_TRUE(contains(r, "OBJECT_INTO_CONTAINER{object->ball, container->cup}"));

  auto path = load_scenario("path.scn");
  r = texts(classify(library(), path, *path.trace));
  EXPECT_TRUE(contains(r, "SOURCE_PATH_GOAL{traveler->walker, w1->start, w2->mid, w3->goal}"));
  EXPECT_FALSE(contains(r, "SOURCE_PATH_GOAL{traveler->walker, w1->goal, w2->mid, w3->start}"));

  auto stack = load_scenario("stack.scn");
  auto cs = classify(library(), stack, *stack.trace);
  r = texts(cs);
  EXPECT_TRUE(contains(r, "SUPPORT{upper->box, lower->table}"));
  EXPECT_TRUE(contains(r, "SUPPORT{upper->table, lower->floor}"));
  EXPECT_TRUE(contains(r, "AT_REST{x->box}"));
  EXPECT_FALSE(any_schema(cs, "MOTION"));
}

TEST(Classify, OrderAndFilter) {
  auto stack = load_scenario("stack.scn");
  auto cs = classify(library(), stack, *stack.trace, {"SUPPORT"});
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_LT(cs[0].binding, cs[1].binding);
  for (const auto& c : cs) EXPECT_EQ(c.binding.schema, "SUPPORT");
  EXPECT_THROW(classify(library(), stack, *stack.trace, {"NOPE"}), Error);
}

TEST(Classify, SoundAndCompleteAgainstReference) {
  for (const char* file : kGoldens) {
    SCOPED_TRACE(file);
    auto sc = load_scenario(file);
    std::set<std::string> got;
    for (const auto& t : texts(classify(library(), sc, *sc.trace))) got.insert(t);
    EXPECT_EQ(got, brute_force(sc, *sc.trace));
  }
  Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    Scenario sc;
    sc.name = "R";
    sc.entities = random_entities(rng, 4);
    sc.trace = random_trace(rng, sc.entities, static_cast<std::size_t>(rng.range(1, 6)));
    std::set<std::string> got;
    for (const auto& t : texts(classify(library(), sc, *sc.trace))) got.insert(t);
    EXPECT_EQ(got, brute_force(sc, *sc.trace)) << "random scenario " << i;
  }
}

TEST(Classify, PermutationInvariance) {
  for (const char* file : kGoldens) {
    SCOPED_TRACE(file);
    auto sc = load_scenario(file);
    std::map<std::string, std::string> names;
    // Reverse the declaration order of the ids so the lexicographic order flips.
    for (std::size_t i = 0; i < sc.entities.size(); ++i) {
      names[sc.entities[i].id] = "z" + std::to_string(sc.entities.size() - i) + "_" + sc.entities[i].id;
    }
    auto renamed = rename(sc, names);
    std::set<std::string> expected;
    for (const auto& c : classify(library(), sc, *sc.trace)) {
      SchemaBinding b = c.binding;
      for (auto& [role, entity] : b.roles) entity = names.at(entity);
      expected.insert(b.to_text());
    }
    std::set<std::string> got;
    for (const auto& t : texts(classify(library(), renamed, *renamed.trace))) got.insert(t);
    EXPECT_EQ(got, expected);
  }
}

TEST(Analogy, Revolution) {
  auto solar = load_scenario("solar.scn");
  auto atom = load_scenario("atom.scn");
  auto found = analogy(library(), solar, *solar.trace, atom, *atom.trace, "REVOLUTION");
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(found->first.to_text(), "REVOLUTION{orbiter->planet, center->sun}");
  EXPECT_EQ(found->second.to_text(), "REVOLUTION{orbiter->electron, center->nucleus}");

  auto stack = load_scenario("stack.scn");
  EXPECT_FALSE(analogy(library(), solar, *solar.trace, stack, *stack.trace, "REVOLUTION").has_value());
  EXPECT_THROW(analogy(library(), solar, *solar.trace, atom, *atom.trace, "NOPE"), Error);
}

TEST(Analogy, LiteralThetaFailsAcrossTheCut) {
  // The wrap-safe ccwStep holds on every step of a full orbit while the
  // literal angle comparison fails where theta jumps from pi to -pi.
  auto solar = load_scenario("solar.scn");
  World w = solar.world();
  Environment env = library().environment(Theory{});
  EvalContext ctx{w, *solar.trace, env, Tolerances{}};
  Formula ccw = fml::always(fml::implies(fml::not_(fml::final_()), fml::atom("ccwStep", {"planet", "sun"})));
  Formula literal =
      fml::always(fml::implies(fml::not_(fml::final_()), fml::atom("thetaIncreases", {"planet", "sun"})));
  EXPECT_TRUE(eval_formula(ccw, ctx, 0));
  EXPECT_FALSE(eval_formula(literal, ctx, 0));
}
