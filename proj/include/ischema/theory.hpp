#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ischema/ast.hpp"
#include "ischema/model.hpp"

namespace ischema {

struct RelationArg {
  std::string var;  // empty for a bare signature
  std::string sort;

  bool operator==(const RelationArg&) const = default;
};

// Either a signature for a built-in (no body), or a defined relation whose
// body is a formula over its arguments. Defined relations may carry numeric
// parameters after a semicolon: LINK(a: Entity, b: Entity; tau).
struct RelationDef {
  std::string name;
  std::vector<RelationArg> args;
  std::vector<std::string> numeric_params;
  std::optional<Formula> body;
  SourceSpan span;

  bool defined() const { return body.has_value(); }
};

bool equal(const RelationDef& a, const RelationDef& b);

struct RoleDecl {
  std::string role;
  std::string sort;
  SourceSpan span;

  bool operator==(const RoleDecl& o) const { return role == o.role && sort == o.sort; }
};

// An image schema or scenario constraint set.
struct Theory {
  std::string name;
  std::vector<Sort> sorts;
  std::vector<RoleDecl> roles;
  std::vector<RelationDef> relations;
  std::map<std::string, Rational> params;
  // Role pairs allowed to bind the same entity.
  std::vector<std::pair<std::string, std::string>> aliases;
  std::vector<Formula> axioms;

  const RoleDecl* role(std::string_view name) const;
  bool may_alias(std::string_view a, std::string_view b) const;
};

bool equal(const Theory& a, const Theory& b);

// Relation definitions and numeric parameters visible while evaluating: a
// prelude (typically the primitives file) overlaid by the theory itself.
class Environment {
 public:
  Environment() = default;
  explicit Environment(const Theory& theory, const Theory* prelude = nullptr);

  const RelationDef* relation(std::string_view name) const;
  std::optional<Rational> param(std::string_view name) const;
  const std::map<std::string, RelationDef, std::less<>>& relations() const { return relations_; }

  void set_param(const std::string& name, Rational value) { params_[name] = std::move(value); }

 private:
  std::map<std::string, RelationDef, std::less<>> relations_;
  std::map<std::string, Rational, std::less<>> params_;
};

}  // namespace ischema
