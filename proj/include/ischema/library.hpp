#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ischema/logic.hpp"
#include "ischema/scenario.hpp"
#include "ischema/theory.hpp"

namespace ischema {

// ---------------------------------------------------------------------------
// Conceptual primitives
// ---------------------------------------------------------------------------

enum class PrimitiveKind { Entity, Relational, Attributive, ForceDynamic };
enum class Realization { Sort, BuiltinRelation, Macro, RuleConstructor, SimulatorDefault };

std::string_view to_string(PrimitiveKind kind);
std::string_view to_string(Realization r);

struct PrimitiveDef {
  std::string name;     // canonical spelling, e.g. "START_PATH", "active-UMPH"
  PrimitiveKind kind;
  Realization realization;
  std::string target;   // sort, relation, macro or rule constructor realizing it
  std::string doc;
};

const std::vector<PrimitiveDef>& primitive_catalog();
const PrimitiveDef* find_primitive(std::string_view name);

// ---------------------------------------------------------------------------
// Schema library
// ---------------------------------------------------------------------------

// The primitives prelude plus the schema theories of a library directory.
class Library {
 public:
  // Parses and sort-checks every .ist file of `dir`; primitives.ist is the
  // prelude. Throws Error(InvalidArgument) with the formatted diagnostics.
  static Library load(const std::filesystem::path& dir);
  // ISCHEMA_LIBRARY if set, else the directory the build was configured with.
  static std::filesystem::path default_dir();

  const Theory& prelude() const { return prelude_; }
  const Theory& schema(std::string_view name) const;  // throws UnknownSchema
  bool has_schema(std::string_view name) const;
  std::vector<std::string> schema_names() const;  // sorted

  Environment environment(const Theory& theory) const { return Environment(theory, &prelude_); }

 private:
  Theory prelude_;
  std::map<std::string, Theory, std::less<>> schemas_;
};

// SOURCE_PATH_GOAL with `n` waypoints w1..wn (n >= 2).
Theory source_path_goal(std::size_t n, const Rational& tau = Rational(1, 2));

// ---------------------------------------------------------------------------
// Classification and analogy
// ---------------------------------------------------------------------------

struct SchemaBinding {
  std::string schema;
  std::vector<std::pair<std::string, std::string>> roles;  // role -> entity, role order

  RoleBinding map() const { return RoleBinding(roles.begin(), roles.end()); }
  std::string to_text() const;  // SCHEMA{role->entity, ...}
  bool operator==(const SchemaBinding&) const = default;
  auto operator<=>(const SchemaBinding&) const = default;
};

struct Classification {
  SchemaBinding binding;
  CheckReport report;
};

// Every sort-compatible role binding. Roles bind distinct entities unless the
// theory declares the pair as aliases. Ordered by entity declaration order.
std::vector<RoleBinding> candidate_bindings(const Theory& theory, const World& world);

struct ClassifyOptions {
  Tolerances tol;
  Evaluator evaluator = Evaluator::Fast;
  std::map<std::string, Rational> params;  // overrides of theory parameters
};

// Satisfied bindings of the named schemas (all when empty), sorted by schema
// name then by the entities in role order. The scenario must carry a trace.
std::vector<Classification> classify(const Library& lib, const Scenario& sc, const Trace& trace,
                                     const std::vector<std::string>& schemas = {},
                                     const ClassifyOptions& opts = {});

// First binding pair (canonical order) satisfying the schema in both traces.
std::optional<std::pair<SchemaBinding, SchemaBinding>> analogy(const Library& lib, const Scenario& a,
                                                               const Trace& ta, const Scenario& b,
                                                               const Trace& tb, const std::string& schema,
                                                               const ClassifyOptions& opts = {});

// Scenario entities over the sorts of the prelude, the theory and the scenario.
World world_for(const Library& lib, const Theory& theory, const Scenario& sc);

// Environment for a theory with parameter overrides applied.
Environment make_environment(const Library& lib, const Theory& theory,
                             const std::map<std::string, Rational>& params);

}  // namespace ischema
