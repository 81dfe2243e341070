#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ischema/ast.hpp"
#include "ischema/model.hpp"

namespace ischema {

// Effect targets are entity ids or the rule's scope variable.
struct SetParam {
  Term target;
  std::string param;
  NumExpr value;
};
struct DeltaParam {
  Term target;
  std::string param;
  NumExpr amount;
  // Gravity only: never move the entity's bottom below the surface under it.
  bool clamp_to_support = false;
};
struct AddForce {
  std::string label;
  Term target;
  Rational dx;
  Rational dy;
  ForceMode mode = ForceMode::Active;
};
struct RemoveForce {
  std::string label;
  Term target;
};

using Effect = std::variant<SetParam, DeltaParam, AddForce, RemoveForce>;

bool equal(const Effect& a, const Effect& b);

struct RuleScope {
  std::string var;
  std::string sort;
  std::vector<std::string> except;  // sorts left out of the domain

  bool operator==(const RuleScope&) const = default;
};

// Custom rules come from the `rule` form; the other kinds are built by
// gravity_rule and umph_rule and print back in their short forms.
enum class RuleKind { Custom, Gravity, Umph };

struct Rule {
  std::string name;
  std::optional<RuleScope> scope;
  Formula condition;
  std::vector<Effect> effects;
  // When present the rule fires only while this is false.
  std::optional<Formula> until;

  RuleKind kind = RuleKind::Custom;
  std::optional<Rational> delta;  // gravity step; nullopt = configured default
  std::string force_label;        // umph
  std::string force_target;       // umph

  SourceSpan span;
};

bool equal(const Rule& a, const Rule& b);

}  // namespace ischema
