#include <gtest/gtest.h>

#include "ischema/dsl.hpp"
#include "support.hpp"

using namespace ischema;
using namespace testing_support;

namespace {

bool is_theory(const std::filesystem::path& p) { return p.extension() == ".ist"; }

Scenario random_trace_scenario(Rng& rng, int index) {
  Scenario sc;
  sc.name = "RANDOM" + std::to_string(index);
  sc.entities = random_entities(rng, 4);
  Trace tr = random_trace(rng, sc.entities, static_cast<std::size_t>(rng.range(1, 6)), true);
  sc.forces = tr.states[0].forces;
  sc.trace = tr;
  return sc;
}

}  // namespace

TEST(RoundTrip, ShippedFiles) {
  auto files = shipped_files();
  ASSERT_GE(files.size(), 10u);
  for (const auto& path : files) {
    SCOPED_TRACE(path.string());
    std::string text = read_text(path);
    if (is_theory(path)) {
      auto first = parse_theory(text, path.string());
      ASSERT_TRUE(first.ok()) << joined(first.diagnostics);
      std::string printed = print_theory(*first.value);
      auto second = parse_theory(printed, "printed.ist");
      ASSERT_TRUE(second.ok()) << joined(second.diagnostics) << printed;
      EXPECT_TRUE(equal(*first.value, *second.value)) << printed;
      EXPECT_EQ(print_theory(*second.value), printed);
    } else {
      auto first = parse_scenario(text, path.string());
      ASSERT_TRUE(first.ok()) << joined(first.diagnostics);
      std::string printed = print_scenario(*first.value);
      auto second = parse_scenario(printed, "printed.scn");
      ASSERT_TRUE(second.ok()) << joined(second.diagnostics) << printed;
      EXPECT_TRUE(equal(*first.value, *second.value)) << printed;
      EXPECT_EQ(print_scenario(*second.value), printed);
    }
  }
}

TEST(RoundTrip, RandomTraces) {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    Scenario sc = random_trace_scenario(rng, i);
    ASSERT_NO_THROW(declare_scenario(sc));

    std::string text = print_scenario(sc);
    auto parsed = parse_scenario(text, "random.scn");
    ASSERT_TRUE(parsed.ok()) << joined(parsed.diagnostics) << text;
    EXPECT_TRUE(equal(sc, *parsed.value)) << text;

    std::string doc = serialize_trace(*sc.trace, sc.entities);
    TraceDocument back = parse_trace_json(doc);
    EXPECT_EQ(back.trace, *sc.trace);
    EXPECT_EQ(back.entities, sc.entities);
    EXPECT_EQ(serialize_trace(back.trace, back.entities), doc);
  }
}

TEST(TraceJson, RejectsMalformedDocuments) {
  auto sc = load_scenario("fig1.scn");
  std::string doc = serialize_trace(*sc.trace, sc.entities);
  EXPECT_THROW(parse_trace_json("{"), Error);
  EXPECT_THROW(parse_trace_json("{}"), Error);
  std::string wrong_length = doc;
  wrong_length.replace(wrong_length.find("\"length\": 1"), 11, "\"length\": 2");
  EXPECT_THROW(parse_trace_json(wrong_length), Error);
  std::string bad_value = doc;
  bad_value.replace(bad_value.find("\"4\""), 3, "\"x4\"");
  EXPECT_THROW(parse_trace_json(bad_value), Error);
}

TEST(SortCheck, InsideMisapplicationIsSpanned) {
  const char* text =
      "theory WRONG\n"
      "  role a : Object\n"
      "  role c : Container\n"
      "  relation inside(Object, Container)\n"
      "  axiom inside(c, a)\n"
      "end\n";
  auto parsed = parse_theory(text, "wrong.ist");
  ASSERT_TRUE(parsed.ok()) << joined(parsed.diagnostics);
  auto diags = sort_check(*parsed.value, &library().prelude());
  ASSERT_TRUE(has_errors(diags));
  const Diagnostic& d = diags.front();
  EXPECT_EQ(d.code, "SortMismatch");
  EXPECT_EQ(d.span.file, "wrong.ist");
  EXPECT_EQ(d.span.line, 5u);
  EXPECT_EQ(d.span.column, 16u);
  EXPECT_EQ(d.span.length, 1u);
  EXPECT_EQ(format_diagnostic(d).rfind("wrong.ist:5:16: error[SortMismatch]: ", 0), 0u) << format_diagnostic(d);

  auto good = parse_theory(
      "theory RIGHT\n  role a : Object\n  role c : Container\n  relation inside(Object, Container)\n"
      "  axiom inside(a, c)\nend\n",
      "right.ist");
  ASSERT_TRUE(good.ok());
  EXPECT_FALSE(has_errors(sort_check(*good.value, &library().prelude())));
}

TEST(SortCheck, OtherDiagnostics) {
  auto codes = [](const std::string& body) {
    auto parsed = parse_theory("theory T\n  role a : Object\n  role c : Container\n" + body + "end\n", "t.ist");
    std::vector<std::string> out;
    for (const auto& d : parsed.diagnostics) out.push_back(d.code);
    if (parsed.ok()) {
      for (const auto& d : sort_check(*parsed.value, &library().prelude())) out.push_back(d.code);
    }
    return out;
  };
  EXPECT_EQ(codes("  axiom inside(a, z)\n"), std::vector<std::string>{"UnboundSymbol"});
  EXPECT_EQ(codes("  axiom inside(a)\n"), std::vector<std::string>{"ArityMismatch"});
  EXPECT_EQ(codes("  axiom frobs(a, c)\n"), std::vector<std::string>{"UnknownRelation"});
  EXPECT_EQ(codes("  axiom forall x : Nope . inside(x, c)\n"), std::vector<std::string>{"UnknownSort"});
  EXPECT_EQ(codes("  role p : Path\n  axiom p.r > 1\n"), std::vector<std::string>{"UnknownParameter"});
  EXPECT_EQ(codes("  role a : Object\n"), std::vector<std::string>{"DuplicateRole"});
  EXPECT_TRUE(codes("  axiom always (c.r > 1 and next(a.x) > a.x)\n").empty());
}

TEST(Parser, SyntaxErrorsCarryLocations) {
  auto parsed = parse_theory("theory T\n  role a : Object\n  axiom inside(a,\nend\n", "bad.ist");
  EXPECT_FALSE(parsed.ok());
  ASSERT_FALSE(parsed.diagnostics.empty());
  EXPECT_EQ(parsed.diagnostics.front().span.file, "bad.ist");
  EXPECT_GE(parsed.diagnostics.front().span.line, 3u);

  auto reserved = parse_theory("theory T\n  role always : Object\nend\n", "r.ist");
  EXPECT_FALSE(reserved.ok());
  EXPECT_TRUE(is_reserved_word("until"));
  EXPECT_FALSE(is_reserved_word("inside"));
}

TEST(Parser, ScenarioErrors) {
  auto has_code = [](const std::string& text, const std::string& code) {
    auto parsed = parse_scenario(text, "s.scn");
    for (const auto& d : parsed.diagnostics) {
      if (d.code == code) return true;
    }
    return false;
  };
  EXPECT_TRUE(has_code("scenario S\n  entity a : Object = point(0,0)\n  entity a : Object = point(1,1)\n"
                       "  trace length 1\nend\n",
                       "DuplicateEntity"));
  EXPECT_TRUE(has_code("scenario S\n  entity a : Container = point(0,0)\n  trace length 1\nend\n",
                       "BadShapeForSort"));
  EXPECT_TRUE(has_code("scenario S\n  entity a : Container = circle(0,0,-1)\n  trace length 1\nend\n",
                       "NegativeExtent"));
  EXPECT_TRUE(has_code("scenario S\n  entity a : Object = point(0,0)\n  trace length 2\n  state 2 { a.x = 1 }\nend\n",
                       "TimeOutOfRange"));
}

TEST(Parser, PrecedenceMatchesGrammar) {
  auto parsed = parse_theory(
      "theory P\n  role a : Object\n  axiom not inside(a,a) and true or false -> eventually final\nend\n", "p.ist");
  ASSERT_TRUE(parsed.ok()) << joined(parsed.diagnostics);
  Formula expected =
      fml::implies(fml::or_(fml::and_(fml::not_(fml::atom("inside", {"a", "a"})), fml::truth(true)), fml::truth(false)),
                   fml::eventually(fml::final_()));
  EXPECT_TRUE(equal(parsed.value->axioms.at(0), expected));

  auto until = parse_theory("theory U\n  role a : Object\n  axiom true until false until true\nend\n", "u.ist");
  ASSERT_TRUE(until.ok());
  EXPECT_TRUE(equal(until.value->axioms.at(0),
                    fml::until(fml::truth(true), fml::until(fml::truth(false), fml::truth(true)))));
}

TEST(Printer, CanonicalRationals) {
  auto parsed = parse_scenario("scenario Q\n  entity a : Object = point(0.50, 2/4)\n  trace length 1\nend\n", "q.scn");
  ASSERT_TRUE(parsed.ok());
  std::string text = print_scenario(*parsed.value);
  EXPECT_NE(text.find("point(0.5, 0.5)"), std::string::npos) << text;
}
