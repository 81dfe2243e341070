#include <algorithm>
#include <map>
#include <set>

#include "ischema/dsl.hpp"
#include "ischema/geometry.hpp"

namespace ischema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class Checker {
 public:
  Checker(SortHierarchy sorts, Environment env) : sorts_(std::move(sorts)), env_(std::move(env)) {}

  std::vector<Diagnostic> diags;

  void error(const SourceSpan& span, std::string code, std::string message) {
    diags.push_back(Diagnostic{Severity::Error, std::move(code), std::move(message), span});
  }

  bool known_sort(const std::string& sort, const SourceSpan& span) {
    if (sorts_.contains(sort)) return true;
    error(span, "UnknownSort", "unknown sort '" + sort + "'");
    return false;
  }

  using Scope = std::map<std::string, std::string>;  // term -> sort

  std::optional<std::string> term_sort(const Term& t, const Scope& scope) {
    auto it = scope.find(t.name);
    if (it != scope.end()) return it->second;
    error(t.span, "UnboundSymbol", "'" + t.name + "' is not a declared role, variable or entity");
    return std::nullopt;
  }

  void expect_sort(const Term& t, const Scope& scope, const std::string& expected, const std::string& what) {
    auto sort = term_sort(t, scope);
    if (!sort || !sorts_.contains(*sort) || !sorts_.contains(expected)) return;
    if (!sorts_.subsort_of(*sort, expected)) {
      error(t.span, "SortMismatch",
            what + " expects sort " + expected + ", but '" + t.name + "' has sort " + *sort);
    }
  }

  bool param_possible(const std::string& sort, const std::string& param) {
    if (!is_geometric_param(param)) return true;  // attribute such as `open`
    if (!sorts_.contains(sort)) return true;
    for (ShapeKind k : sorts_.admissible_shapes(sort)) {
      if (is_shape_param(k, param)) return true;
    }
    return false;
  }

  void num(const NumExpr& e, const Scope& scope, const std::set<std::string>& symbols) {
    std::visit(overloaded{
                   [&](const NumParamRef& p) {
                     auto sort = term_sort(p.entity, scope);
                     if (sort && !param_possible(*sort, p.param)) {
                       error(e->span, "UnknownParameter",
                             "no shape of sort " + *sort + " has parameter '" + p.param + "'");
                     }
                   },
                   [&](const NumSymbol& s) {
                     if (!symbols.contains(s.name)) {
                       error(e->span, "UnboundSymbol", "unknown numeric symbol '" + s.name + "'");
                     }
                   },
                   [&](const NumBinary& b) {
                     num(b.lhs, scope, symbols);
                     num(b.rhs, scope, symbols);
                   },
                   [&](const NumNeg& n) { num(n.operand, scope, symbols); },
                   [&](const NumPow& p) { num(p.base, scope, symbols); },
                   [&](const NumNext& n) { num(n.operand, scope, symbols); },
                   [&](const NumDelta& d) {
                     term_sort(d.a, scope);
                     term_sort(d.b, scope);
                   },
                   [&](const NumTheta& d) {
                     term_sort(d.a, scope);
                     term_sort(d.b, scope);
                   },
                   [&](const NumMeasure& m) { term_sort(m.a, scope); },
                   [](const NumConst&) {},
               },
               e->node);
  }

  void atom(const FAtom& a, const SourceSpan& span, const Scope& scope, const std::set<std::string>& symbols) {
    for (const auto& n : a.numeric) num(n, scope, symbols);
    std::vector<std::string> arg_sorts;
    std::size_t numerics = 0;
    const RelationDef* def = env_.relation(a.relation);
    auto builtin = builtin_arity(a.relation);
    if (def && def->defined()) {
      for (const auto& arg : def->args) arg_sorts.push_back(arg.sort);
      numerics = def->numeric_params.size();
    } else if (builtin) {
      if (def) {
        if (def->args.size() != builtin->entities) {
          error(def->span, "ArityMismatch",
                "built-in '" + a.relation + "' takes " + std::to_string(builtin->entities) + " arguments");
          return;
        }
        for (const auto& arg : def->args) arg_sorts.push_back(arg.sort);
      } else {
        arg_sorts.assign(builtin->entities, std::string(sorts::kEntity));
      }
      numerics = builtin->numerics;
    } else {
      error(span, "UnknownRelation", def ? "relation '" + a.relation + "' has no definition and is not built in"
                                         : "unknown relation '" + a.relation + "'");
      for (const auto& t : a.args) term_sort(t, scope);
      return;
    }
    if (a.args.size() != arg_sorts.size() || a.numeric.size() != numerics) {
      error(span, "ArityMismatch",
            a.relation + " takes " + std::to_string(arg_sorts.size()) + " entity and " +
                std::to_string(numerics) + " numeric arguments, got " + std::to_string(a.args.size()) +
                " and " + std::to_string(a.numeric.size()));
      for (const auto& t : a.args) term_sort(t, scope);
      return;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      expect_sort(a.args[i], scope, arg_sorts[i],
                  "argument " + std::to_string(i + 1) + " of " + a.relation);
    }
  }

  void formula(const Formula& f, const Scope& scope, const std::set<std::string>& symbols) {
    std::visit(overloaded{
                   [&](const FAtom& a) { atom(a, f->span, scope, symbols); },
                   [&](const FCompare& c) {
                     num(c.lhs, scope, symbols);
                     num(c.rhs, scope, symbols);
                   },
                   [&](const FUnary& u) { formula(u.operand, scope, symbols); },
                   [&](const FBinary& b) {
                     formula(b.lhs, scope, symbols);
                     formula(b.rhs, scope, symbols);
                   },
                   [&](const FQuant& q) {
                     known_sort(q.sort, f->span);
                     Scope inner = scope;
                     inner[q.var] = q.sort;
                     formula(q.body, inner, symbols);
                   },
                   [](const auto&) {},
               },
               f->node);
  }

  void relation(const RelationDef& def, const std::set<std::string>& params) {
    Scope scope;
    for (const auto& arg : def.args) {
      known_sort(arg.sort, def.span);
      if (!arg.var.empty() && !scope.emplace(arg.var, arg.sort).second) {
        error(def.span, "DuplicateArgument", "argument '" + arg.var + "' of " + def.name + " repeated");
      }
    }
    if (!def.body) return;
    std::set<std::string> symbols = params;
    symbols.insert(def.numeric_params.begin(), def.numeric_params.end());
    formula(*def.body, scope, symbols);
  }

  const SortHierarchy& sorts() const { return sorts_; }
  const Environment& env() const { return env_; }

 private:
  SortHierarchy sorts_;
  Environment env_;
};

std::set<std::string> param_names(const Theory* prelude, const std::map<std::string, Rational>* own) {
  std::set<std::string> out;
  if (prelude) {
    for (const auto& [k, v] : prelude->params) out.insert(k);
  }
  if (own) {
    for (const auto& [k, v] : *own) out.insert(k);
  }
  return out;
}

std::optional<SortHierarchy> hierarchy_or_report(std::vector<Sort> sorts, const Theory* prelude,
                                                 const SourceSpan& span, std::vector<Diagnostic>& diags) {
  if (prelude) sorts.insert(sorts.begin(), prelude->sorts.begin(), prelude->sorts.end());
  try {
    return build_hierarchy(sorts);
  } catch (const Error& e) {
    diags.push_back(Diagnostic{Severity::Error, std::string(to_string(e.code())), e.what(), span});
    return std::nullopt;
  }
}

}  // namespace

std::vector<Diagnostic> sort_check(const Theory& th, const Theory* prelude) {
  std::vector<Diagnostic> diags;
  SourceSpan anchor = th.roles.empty() ? SourceSpan{} : th.roles.front().span;
  auto sorts = hierarchy_or_report(th.sorts, prelude, anchor, diags);
  if (!sorts) return diags;
  Checker c(*sorts, Environment(th, prelude));
  std::set<std::string> params = param_names(prelude, &th.params);

  Checker::Scope roles;
  for (const auto& r : th.roles) {
    c.known_sort(r.sort, r.span);
    if (!roles.emplace(r.role, r.sort).second) {
      c.error(r.span, "DuplicateRole", "role '" + r.role + "' declared twice");
    }
  }
  for (const auto& [a, b] : th.aliases) {
    for (const auto& name : {a, b}) {
      if (!roles.contains(name)) c.error(anchor, "UnboundSymbol", "alias names unknown role '" + name + "'");
    }
  }
  std::set<std::string> seen;
  for (const auto& rel : th.relations) {
    if (!seen.insert(rel.name).second) {
      c.error(rel.span, "DuplicateRelation", "relation '" + rel.name + "' declared twice");
    }
    c.relation(rel, params);
  }
  for (const auto& ax : th.axioms) c.formula(ax, roles, params);
  return c.diags;
}

std::vector<Diagnostic> sort_check(const Scenario& sc, const Theory* prelude) {
  std::vector<Diagnostic> diags;
  auto sorts = hierarchy_or_report(sc.sorts, prelude, {}, diags);
  if (!sorts) return diags;
  Theory empty;
  Checker c(*sorts, Environment(empty, prelude));
  std::set<std::string> params = param_names(prelude, nullptr);
  Checker::Scope entities;
  for (const auto& e : sc.entities) {
    c.known_sort(e.sort, {});
    entities[e.id] = e.sort;
  }
  if (!sc.rules) return c.diags;
  for (const auto& r : *sc.rules) {
    Checker::Scope scope = entities;
    if (r.scope) {
      c.known_sort(r.scope->sort, r.span);
      for (const auto& s : r.scope->except) c.known_sort(s, r.span);
      scope[r.scope->var] = r.scope->sort;
    }
    c.formula(r.condition, scope, params);
    if (r.until) c.formula(*r.until, scope, params);
    for (const auto& eff : r.effects) {
      auto check_param = [&](const Term& target, const std::string& param) {
        auto sort = c.term_sort(target, scope);
        if (!sort) return;
        auto it = std::find_if(sc.entities.begin(), sc.entities.end(),
                               [&](const EntityDecl& e) { return e.id == target.name; });
        bool ok = it != sc.entities.end() && !(r.scope && r.scope->var == target.name)
                      ? it->find(param) != nullptr
                      : c.param_possible(*sort, param);
        if (!ok) {
          c.error(target.span.line ? target.span : r.span, "UnknownParameter",
                  "'" + target.name + "' has no parameter '" + param + "'");
        }
      };
      std::visit(overloaded{
                     [&](const SetParam& e) {
                       check_param(e.target, e.param);
                       c.num(e.value, scope, params);
                     },
                     [&](const DeltaParam& e) {
                       check_param(e.target, e.param);
                       c.num(e.amount, scope, params);
                     },
                     [&](const AddForce& e) { c.term_sort(e.target, scope); },
                     [&](const RemoveForce& e) { c.term_sort(e.target, scope); },
                 },
                 eff);
    }
  }
  return c.diags;
}

}  // namespace ischema
