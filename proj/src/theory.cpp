#include "ischema/theory.hpp"

#include <algorithm>

namespace ischema {

bool equal(const RelationDef& a, const RelationDef& b) {
  if (a.name != b.name || a.args != b.args || a.numeric_params != b.numeric_params) return false;
  if (a.body.has_value() != b.body.has_value()) return false;
  return !a.body || equal(*a.body, *b.body);
}

const RoleDecl* Theory::role(std::string_view name) const {
  for (const auto& r : roles) {
    if (r.role == name) return &r;
  }
  return nullptr;
}

bool Theory::may_alias(std::string_view a, std::string_view b) const {
  return std::any_of(aliases.begin(), aliases.end(), [&](const auto& p) {
    return (p.first == a && p.second == b) || (p.first == b && p.second == a);
  });
}

bool equal(const Theory& a, const Theory& b) {
  if (a.name != b.name || a.sorts != b.sorts || a.roles != b.roles || a.params != b.params ||
      a.aliases != b.aliases || a.relations.size() != b.relations.size() ||
      a.axioms.size() != b.axioms.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.relations.size(); ++i) {
    if (!equal(a.relations[i], b.relations[i])) return false;
  }
  for (std::size_t i = 0; i < a.axioms.size(); ++i) {
    if (!equal(a.axioms[i], b.axioms[i])) return false;
  }
  return true;
}

Environment::Environment(const Theory& theory, const Theory* prelude) {
  for (const Theory* layer : {prelude, &theory}) {
    if (!layer) continue;
    for (const auto& rel : layer->relations) relations_.insert_or_assign(rel.name, rel);
    for (const auto& [name, value] : layer->params) params_.insert_or_assign(name, value);
  }
}

const RelationDef* Environment::relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

std::optional<Rational> Environment::param(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) return std::nullopt;
  return it->second;
}

}  // namespace ischema
