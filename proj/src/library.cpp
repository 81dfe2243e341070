#include "ischema/library.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ischema/dsl.hpp"

#ifndef ISCHEMA_LIBRARY_DIR
#define ISCHEMA_LIBRARY_DIR "library"
#endif

namespace ischema {

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Entity: return "entity";
    case PrimitiveKind::Relational: return "relational";
    case PrimitiveKind::Attributive: return "attributive";
    case PrimitiveKind::ForceDynamic: return "force-dynamic";
  }
  return "?";
}

std::string_view to_string(Realization r) {
  switch (r) {
    case Realization::Sort: return "sort";
    case Realization::BuiltinRelation: return "built-in relation";
    case Realization::Macro: return "formula macro";
    case Realization::RuleConstructor: return "rule constructor";
    case Realization::SimulatorDefault: return "simulator default";
  }
  return "?";
}

const std::vector<PrimitiveDef>& primitive_catalog() {
  using K = PrimitiveKind;
  using R = Realization;
  static const std::vector<PrimitiveDef> catalog = {
      {"OBJECT", K::Entity, R::Sort, "Object", "a point (or small shape) entity"},
      {"CONTAINER", K::Entity, R::Sort, "Container", "superclass of Circle and Rectangle"},
      {"PATH", K::Entity, R::Sort, "Path", "a segment from (x1,y1) to (x2,y2)"},
      {"REGION", K::Entity, R::Sort, "Region", "a region entity, or closeTo with a distance threshold"},
      {"DOWN", K::Entity, R::Sort, "Floor", "a horizontal line at the bottom of the scene, with gravity"},
      {"UP", K::Entity, R::Sort, "Floor", "away from the Floor; the opposite of gravity's direction"},
      {"LOCATION", K::Relational, R::BuiltinRelation, "on", "positional atoms on, closeTo, inside"},
      {"START_PATH", K::Relational, R::Macro, "START_PATH", "x sits at the first endpoint of a path"},
      {"END_PATH", K::Relational, R::Macro, "END_PATH", "x sits at the last endpoint of a path"},
      {"CONTACT", K::Relational, R::BuiltinRelation, "contact", "boundaries touch, interiors apart"},
      {"CONTAINED", K::Relational, R::BuiltinRelation, "inside", "strictly inside a container"},
      {"SMALLER", K::Relational, R::BuiltinRelation, "smaller", "measure comparison"},
      {"LARGER", K::Relational, R::BuiltinRelation, "larger", "measure comparison"},
      {"PART_OF", K::Relational, R::BuiltinRelation, "partOf", "non-strict containment"},
      {"PERMANENCE", K::Relational, R::SimulatorDefault, "inertia",
       "unwritten parameters keep their value from one state to the next"},
      {"LINK", K::Relational, R::Macro, "LINK", "closeTo(a,b;tau): distance under a threshold"},
      {"OPEN", K::Attributive, R::Macro, "OPEN", "attribute open = 1"},
      {"CLOSED", K::Attributive, R::Macro, "CLOSED", "attribute open = 0"},
      {"EMPTY", K::Attributive, R::Macro, "EMPTY", "forall o:Object . not inside(o,c)"},
      {"OCCUPIED", K::Attributive, R::Macro, "OCCUPIED", "exists o:Object . inside(o,c)"},
      {"FULL", K::Attributive, R::Macro, "FULL", "occupied, and no declared object outside still fits"},
      {"MOTION", K::Attributive, R::Macro, "MOTION", "position differs at the next state"},
      {"AT_REST", K::Attributive, R::Macro, "AT_REST", "not MOTION"},
      {"ANIMATE_MOTION", K::Attributive, R::Macro, "ANIMATE_MOTION", "MOTION while a force acts"},
      {"INANIMATE_MOTION", K::Attributive, R::Macro, "INANIMATE_MOTION", "MOTION with no force acting"},
      {"active-UMPH", K::ForceDynamic, R::RuleConstructor, "umph",
       "per-step displacement until a goal holds, mode active"},
      {"passive-UMPH", K::ForceDynamic, R::RuleConstructor, "umph",
       "per-step displacement until a goal holds, mode passive"},
  };
  return catalog;
}

const PrimitiveDef* find_primitive(std::string_view name) {
  for (const auto& p : primitive_catalog()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void report(const std::vector<Diagnostic>& diags) {
  std::string msg;
  for (const auto& d : diags) {
    if (!msg.empty()) msg += "\n";
    msg += format_diagnostic(d);
  }
  throw Error(ErrorCode::InvalidArgument, msg);
}

Theory load_theory(const std::filesystem::path& path, const Theory* prelude) {
  auto parsed = parse_theory(read_file(path), path.string());
  if (!parsed.ok()) report(parsed.diagnostics);
  auto diags = sort_check(*parsed.value, prelude);
  if (has_errors(diags)) report(diags);
  return std::move(*parsed.value);
}

}  // namespace

Library Library::load(const std::filesystem::path& dir) {
  Library lib;
  std::filesystem::path prelude = dir / "primitives.ist";
  if (!std::filesystem::exists(prelude)) {
    throw Error(ErrorCode::InvalidArgument, "no primitives.ist in library directory " + dir.string());
  }
  lib.prelude_ = load_theory(prelude, nullptr);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".ist" && entry.path().filename() != "primitives.ist") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Theory th = load_theory(f, &lib.prelude_);
    std::string name = th.name;
    if (!lib.schemas_.emplace(name, std::move(th)).second) {
      throw Error(ErrorCode::InvalidArgument, "schema " + name + " defined twice in " + dir.string());
    }
  }
  return lib;
}

std::filesystem::path Library::default_dir() {
  if (const char* env = std::getenv("ISCHEMA_LIBRARY"); env && *env) return env;
  return ISCHEMA_LIBRARY_DIR;
}

const Theory& Library::schema(std::string_view name) const {
  auto it = schemas_.find(name);
  if (it == schemas_.end()) throw Error(ErrorCode::UnknownSchema, "unknown schema '" + std::string(name) + "'");
  return it->second;
}

bool Library::has_schema(std::string_view name) const { return schemas_.contains(name); }

std::vector<std::string> Library::schema_names() const {
  std::vector<std::string> out;
  for (const auto& [name, th] : schemas_) out.push_back(name);
  return out;
}

Theory source_path_goal(std::size_t n, const Rational& tau) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "SOURCE_PATH_GOAL needs at least two waypoints");
  Theory th;
  th.name = "SOURCE_PATH_GOAL";
  th.roles.push_back(RoleDecl{"traveler", "Object", {}});
  for (std::size_t i = 1; i <= n; ++i) th.roles.push_back(RoleDecl{"w" + std::to_string(i), "Region", {}});
  RelationDef at;
  at.name = "at";
  at.args = {RelationArg{"x", "Object"}, RelationArg{"w", "Region"}};
  at.body = fml::atom("closeTo", {"x", "w"}, {num::symbol("tau")});
  th.relations.push_back(at);
  th.params["tau"] = tau;
  auto at_w = [](std::size_t i) { return fml::atom("at", {"traveler", "w" + std::to_string(i)}); };
  // at(w1) and eventually (at(w2) and eventually (... eventually at(wn)))
  Formula chain = at_w(n);
  for (std::size_t i = n - 1; i >= 1; --i) {
    chain = fml::and_(at_w(i), fml::eventually(chain));
  }
  th.axioms.push_back(chain);
  // Forward movement: reaching w_i means w_{i-1} was reached before.
  Formula forward = fml::always(fml::implies(at_w(2), fml::before(at_w(1))));
  for (std::size_t i = 3; i <= n; ++i) {
    forward = fml::and_(forward, fml::always(fml::implies(at_w(i), fml::before(at_w(i - 1)))));
  }
  th.axioms.push_back(forward);
  return th;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::string SchemaBinding::to_text() const {
  std::string out = schema + "{";
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (i) out += ", ";
    out += roles[i].first + "->" + roles[i].second;
  }
  return out + "}";
}

std::vector<RoleBinding> candidate_bindings(const Theory& theory, const World& world) {
  std::vector<std::vector<std::string>> domains;
  for (const auto& r : theory.roles) domains.push_back(world.domain(r.sort));
  std::vector<RoleBinding> out;
  std::vector<std::string> chosen;
  auto extend = [&](auto&& self, std::size_t i) -> void {
    if (i == theory.roles.size()) {
      RoleBinding b;
      for (std::size_t k = 0; k < chosen.size(); ++k) b[theory.roles[k].role] = chosen[k];
      out.push_back(std::move(b));
      return;
    }
    for (const auto& id : domains[i]) {
      bool clash = false;
      for (std::size_t k = 0; k < i; ++k) {
        if (chosen[k] == id && !theory.may_alias(theory.roles[k].role, theory.roles[i].role)) clash = true;
      }
      if (clash) continue;
      chosen.push_back(id);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  if (!theory.roles.empty()) extend(extend, 0);
  return out;
}

Environment make_environment(const Library& lib, const Theory& theory,
                             const std::map<std::string, Rational>& params) {
  Environment env = lib.environment(theory);
  for (const auto& [name, value] : params) {
    if (env.param(name)) env.set_param(name, value);
  }
  return env;
}

World world_for(const Library& lib, const Theory& theory, const Scenario& sc) {
  std::vector<Sort> sorts = lib.prelude().sorts;
  sorts.insert(sorts.end(), theory.sorts.begin(), theory.sorts.end());
  for (const auto& s : sc.sorts) {
    if (std::find(sorts.begin(), sorts.end(), s) == sorts.end()) sorts.push_back(s);
  }
  return World(sc.entities, build_hierarchy(sorts));
}

namespace {

SchemaBinding to_schema_binding(const Theory& theory, const RoleBinding& b) {
  SchemaBinding sb;
  sb.schema = theory.name;
  for (const auto& r : theory.roles) sb.roles.emplace_back(r.role, b.at(r.role));
  return sb;
}

}  // namespace

std::vector<Classification> classify(const Library& lib, const Scenario& sc, const Trace& trace,
                                     const std::vector<std::string>& schemas, const ClassifyOptions& opts) {
  std::vector<std::string> names = schemas.empty() ? lib.schema_names() : schemas;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::vector<Classification> out;
  for (const auto& name : names) {
    const Theory& theory = lib.schema(name);
    World world = world_for(lib, theory, sc);
    Environment env = make_environment(lib, theory, opts.params);
    std::vector<Classification> found;
    for (const auto& b : candidate_bindings(theory, world)) {
      // A binding on which an axiom reads a parameter the entity lacks (a
      // floor as the center of a revolution) is not an instance.
      CheckReport report;
      try {
        report = check_theory(theory, env, world, trace, b, opts.tol, opts.evaluator);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownParameter) throw;
        continue;
      }
      if (report.satisfied()) found.push_back({to_schema_binding(theory, b), std::move(report)});
    }
    std::sort(found.begin(), found.end(),
              [](const Classification& x, const Classification& y) { return x.binding < y.binding; });
    for (auto& c : found) out.push_back(std::move(c));
  }
  return out;
}

std::optional<std::pair<SchemaBinding, SchemaBinding>> analogy(const Library& lib, const Scenario& a,
                                                               const Trace& ta, const Scenario& b,
                                                               const Trace& tb, const std::string& schema,
                                                               const ClassifyOptions& opts) {
  lib.schema(schema);
  auto left = classify(lib, a, ta, {schema}, opts);
  if (left.empty()) return std::nullopt;
  auto right = classify(lib, b, tb, {schema}, opts);
  if (right.empty()) return std::nullopt;
  return std::make_pair(left.front().binding, right.front().binding);
}

}  // namespace ischema
