// Shared helpers for the unit tests and the acceptance binary.
#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ischema/dsl.hpp"
#include "ischema/library.hpp"
#include "ischema/logic.hpp"

namespace testing_support {

using namespace ischema;

inline std::filesystem::path source_dir() { return ISCHEMA_SOURCE_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string joined(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) out += format_diagnostic(d) + "\n";
  return out;
}

inline Scenario load_scenario(const std::string& file) {
  auto path = source_dir() / "scenarios" / file;
  auto parsed = parse_scenario(read_text(path), path.string());
  if (!parsed.ok()) throw std::runtime_error(joined(parsed.diagnostics));
  return *parsed.value;
}

inline Theory load_theory(const std::filesystem::path& path) {
  auto parsed = parse_theory(read_text(path), path.string());
  if (!parsed.ok()) throw std::runtime_error(joined(parsed.diagnostics));
  return *parsed.value;
}

inline const Library& library() {
  static const Library lib = Library::load(source_dir() / "library");
  return lib;
}

inline std::vector<std::filesystem::path> shipped_files() {
  std::vector<std::filesystem::path> out;
  for (const char* dir : {"library", "scenarios"}) {
    for (const auto& e : std::filesystem::directory_iterator(source_dir() / dir)) {
      auto ext = e.path().extension();
      if (ext == ".ist" || ext == ".scn") out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Random worlds, traces and formulas
// ---------------------------------------------------------------------------

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool coin() { return range(0, 1) == 1; }
  Rational rational(int lo, int hi, int den = 2) {
    Rational q(range(lo * den, hi * den), den);
    q.canonicalize();
    return q;
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }
};

// Up to `max_entities` entities with random shapes; ids e0, e1, ...
inline std::vector<EntityDecl> random_entities(Rng& rng, int max_entities, bool allow_floor = true) {
  int n = rng.range(1, max_entities);
  std::vector<EntityDecl> out;
  for (int i = 0; i < n; ++i) {
    std::string id = "e" + std::to_string(i);
    int kind = rng.range(0, allow_floor && i == 0 ? 4 : 3);
    switch (kind) {
      case 0:
        out.push_back(make_entity(id, "Object", ShapeKind::Point, {rng.rational(-3, 3), rng.rational(-3, 3)}));
        break;
      case 1:
        out.push_back(make_entity(id, "Container", ShapeKind::Circle,
                                  {rng.rational(-3, 3), rng.rational(-3, 3), rng.rational(1, 3)}));
        break;
      case 2:
        out.push_back(make_entity(id, "Object", ShapeKind::Rectangle,
                                  {rng.rational(-3, 3), rng.rational(-3, 3), rng.rational(1, 3), rng.rational(1, 3)}));
        break;
      case 3:
        out.push_back(make_entity(id, "Region", ShapeKind::Point, {rng.rational(-3, 3), rng.rational(-3, 3)}));
        break;
      default:
        out.push_back(make_entity(id, "Floor", ShapeKind::Floor, {rng.rational(-4, -2)}));
        break;
    }
  }
  return out;
}

// Positions move; extents stay. Some entities sit still between steps, so
// MOTION-style comparisons see both outcomes.
inline Trace random_trace(Rng& rng, const std::vector<EntityDecl>& entities, std::size_t length,
                          bool with_forces = false) {
  Trace tr;
  State s = initial_state(entities);
  for (std::size_t t = 0; t < length; ++t) {
    s.time = t;
    if (t > 0) {
      for (const auto& e : entities) {
        if (rng.range(0, 2) == 0) continue;
        for (const char* p : {"x", "y"}) {
          if (s.has(e.id, p)) s.values[{e.id, p}] = rng.rational(-3, 3);
        }
      }
    }
    if (with_forces) {
      s.forces.clear();
      for (const auto& e : entities) {
        if (rng.range(0, 3) == 0) {
          s.forces.insert(ForceFluent{"f" + e.id, e.id, rng.rational(-1, 1), rng.rational(-1, 1),
                                      rng.coin() ? ForceMode::Active : ForceMode::Passive});
        }
      }
    }
    tr.states.push_back(s);
  }
  return tr;
}

class FormulaGen {
 public:
  FormulaGen(Rng& rng, std::vector<std::string> entities) : rng_(rng), entities_(std::move(entities)) {}

  Formula formula(int depth) { return gen(depth, {}); }

 private:
  Rng& rng_;
  std::vector<std::string> entities_;
  int next_var_ = 0;

  std::string term(const std::vector<std::string>& vars) {
    if (!vars.empty() && rng_.coin()) return rng_.pick(vars);
    return rng_.pick(entities_);
  }

  NumExpr coordinate(const std::vector<std::string>& vars) {
    // Only entities with a center carry x; y exists on every shape but
    // Segment, and the generator never builds segments.
    return num::param(term(vars), "y");
  }

  Formula leaf(const std::vector<std::string>& vars) {
    switch (rng_.range(0, 7)) {
      case 0:
        return fml::atom("inside", {term(vars), term(vars)});
      case 1:
        return fml::atom("on", {term(vars), term(vars)});
      case 2:
        return fml::atom("contact", {term(vars), term(vars)});
      case 3:
        return fml::atom("closeTo", {term(vars), term(vars)}, {num::constant(rng_.rational(0, 4))});
      case 4:
        return fml::compare(coordinate(vars), static_cast<CmpOp>(rng_.range(0, 5)),
                            num::constant(rng_.rational(-2, 2)));
      case 5:
        return fml::compare(num::next(coordinate(vars)), static_cast<CmpOp>(rng_.range(0, 5)),
                            coordinate(vars));
      case 6:
        return rng_.coin() ? fml::final_() : fml::truth(rng_.coin());
      default:
        return fml::atom("disjoint", {term(vars), term(vars)});
    }
  }

  Formula gen(int depth, std::vector<std::string> vars) {
    if (depth == 0 || rng_.range(0, 5) == 0) return leaf(vars);
    switch (rng_.range(0, 10)) {
      case 0:
        return fml::not_(gen(depth - 1, vars));
      case 1:
        return fml::next(gen(depth - 1, vars));
      case 2:
        return fml::always(gen(depth - 1, vars));
      case 3:
        return fml::eventually(gen(depth - 1, vars));
      case 4:
        return fml::before(gen(depth - 1, vars));
      case 5:
        return fml::and_(gen(depth - 1, vars), gen(depth - 1, vars));
      case 6:
        return fml::or_(gen(depth - 1, vars), gen(depth - 1, vars));
      case 7:
        return fml::implies(gen(depth - 1, vars), gen(depth - 1, vars));
      case 8:
        return fml::until(gen(depth - 1, vars), gen(depth - 1, vars));
      default: {
        std::string v = "v" + std::to_string(next_var_++);
        vars.push_back(v);
        Formula body = gen(depth - 1, vars);
        return rng_.coin() ? fml::forall(v, "Entity", body) : fml::exists(v, "Entity", body);
      }
    }
  }
};

}  // namespace testing_support
