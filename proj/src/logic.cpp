#include "ischema/logic.hpp"

#include <algorithm>

namespace ischema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string resolve_term(const Term& term, const EvalContext& ctx, const Bindings& b) {
  if (auto it = b.terms.find(term.name); it != b.terms.end()) return it->second;
  if (ctx.world.has_entity(term.name)) return term.name;
  throw Error(ErrorCode::UnboundSymbol, "unbound symbol '" + term.name + "'");
}

NumContext num_context(const EvalContext& ctx, std::size_t t, const Bindings& b) {
  return NumContext{ctx.world, ctx.trace.states, t,
                    [&ctx, &b](const Term& term) { return resolve_term(term, ctx, b); },
                    [&ctx, &b](const std::string& name) -> Number {
                      if (auto it = b.numbers.find(name); it != b.numbers.end()) return it->second;
                      if (auto v = ctx.env.param(name)) return Number(*v);
                      throw Error(ErrorCode::UnboundSymbol, "unbound numeric symbol '" + name + "'");
                    }};
}

// Evaluates the numeric arguments of an atom at t. nullopt when one of them
// looks past the last state.
std::optional<std::vector<Number>> numeric_args(const FAtom& atom, const EvalContext& ctx,
                                                std::size_t t, const Bindings& b) {
  std::vector<Number> values;
  values.reserve(atom.numeric.size());
  try {
    NumContext nc = num_context(ctx, t, b);
    for (const auto& e : atom.numeric) values.push_back(eval_num(e, nc));
  } catch (const NoNextState&) {
    return std::nullopt;
  }
  return values;
}

bool compare_at(const FCompare& c, const EvalContext& ctx, std::size_t t, const Bindings& b) {
  try {
    NumContext nc = num_context(ctx, t, b);
    Number lhs = eval_num(c.lhs, nc);
    Number rhs = eval_num(c.rhs, nc);
    return compare(lhs, c.op, rhs, ctx.tol);
  } catch (const NoNextState&) {
    // A comparison that refers to a state after the last one is false, the
    // same reading as strong next.
    return false;
  }
}

bool builtin_at(const FAtom& atom, const EvalContext& ctx, std::size_t t, const Bindings& b) {
  auto numbers = numeric_args(atom, ctx, t, b);
  if (!numbers) return false;
  std::vector<std::string> ids;
  ids.reserve(atom.args.size());
  for (const auto& term : atom.args) ids.push_back(resolve_term(term, ctx, b));
  return eval_relation(atom.relation, ids, *numbers, ctx.world, ctx.trace.states[t], ctx.tol);
}

// Non-null when the atom names a relation with a definition body.
const RelationDef* defined_relation(const FAtom& atom, const EvalContext& ctx) {
  const RelationDef* def = ctx.env.relation(atom.relation);
  if (def && def->defined()) {
    if (def->args.size() != atom.args.size() || def->numeric_params.size() != atom.numeric.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "relation '" + atom.relation + "' applied to the wrong number of arguments");
    }
    return def;
  }
  if (!is_builtin_relation(atom.relation)) {
    throw Error(ErrorCode::UnknownRelation, "unknown relation '" + atom.relation + "'");
  }
  return nullptr;
}

// Bindings seen inside a defined relation's body: only its own arguments.
std::optional<Bindings> call_bindings(const RelationDef& def, const FAtom& atom,
                                      const EvalContext& ctx, std::size_t t, const Bindings& b) {
  auto numbers = numeric_args(atom, ctx, t, b);
  if (!numbers) return std::nullopt;
  Bindings inner;
  for (std::size_t i = 0; i < def.args.size(); ++i) {
    inner.terms[def.args[i].var] = resolve_term(atom.args[i], ctx, b);
  }
  for (std::size_t i = 0; i < def.numeric_params.size(); ++i) {
    inner.numbers.insert_or_assign(def.numeric_params[i], (*numbers)[i]);
  }
  return inner;
}

void check_time(const EvalContext& ctx, std::size_t t) {
  if (t >= ctx.trace.length()) {
    throw Error(ErrorCode::TimeOutOfRange, "time " + std::to_string(t) + " outside a trace of length " +
                                               std::to_string(ctx.trace.length()));
  }
}

// ---------------------------------------------------------------------------
// Timeline evaluator
// ---------------------------------------------------------------------------

using Timeline = std::vector<bool>;

Timeline timeline(const Formula& f, const EvalContext& ctx, const Bindings& b) {
  const std::size_t n = ctx.trace.length();
  return std::visit(
      overloaded{
          [&](const FAtom& atom) {
            Timeline out(n, false);
            if (const RelationDef* def = defined_relation(atom, ctx)) {
              if (atom.numeric.empty()) {
                Bindings inner = *call_bindings(*def, atom, ctx, 0, b);
                return timeline(*def->body, ctx, inner);
              }
              // Numeric arguments may vary with time; evaluate per instant.
              for (std::size_t t = 0; t < n; ++t) {
                if (auto inner = call_bindings(*def, atom, ctx, t, b)) {
                  out[t] = timeline(*def->body, ctx, *inner)[t];
                }
              }
              return out;
            }
            for (std::size_t t = 0; t < n; ++t) out[t] = builtin_at(atom, ctx, t, b);
            return out;
          },
          [&](const FCompare& c) {
            Timeline out(n, false);
            for (std::size_t t = 0; t < n; ++t) out[t] = compare_at(c, ctx, t, b);
            return out;
          },
          [&](const FConst& c) { return Timeline(n, c.value); },
          [&](const FFinal&) {
            Timeline out(n, false);
            out[n - 1] = true;
            return out;
          },
          [&](const FUnary& u) {
            Timeline a = timeline(u.operand, ctx, b);
            Timeline out(n, false);
            switch (u.op) {
              case UnaryOp::Not:
                for (std::size_t t = 0; t < n; ++t) out[t] = !a[t];
                break;
              case UnaryOp::Next:
                for (std::size_t t = 0; t + 1 < n; ++t) out[t] = a[t + 1];
                break;
              case UnaryOp::Always: {
                bool acc = true;
                for (std::size_t t = n; t-- > 0;) out[t] = acc = acc && a[t];
                break;
              }
              case UnaryOp::Eventually: {
                bool acc = false;
                for (std::size_t t = n; t-- > 0;) out[t] = acc = acc || a[t];
                break;
              }
              case UnaryOp::Before: {
                bool acc = false;
                for (std::size_t t = 0; t < n; ++t) out[t] = acc = acc || a[t];
                break;
              }
            }
            return out;
          },
          [&](const FBinary& bin) {
            Timeline lhs = timeline(bin.lhs, ctx, b);
            bool any = std::find(lhs.begin(), lhs.end(), true) != lhs.end();
            bool all = std::find(lhs.begin(), lhs.end(), false) == lhs.end();
            Timeline out(n, false);
            switch (bin.op) {
              case BinaryOp::And: {
                if (!any) return out;
                Timeline rhs = timeline(bin.rhs, ctx, b);
                for (std::size_t t = 0; t < n; ++t) out[t] = lhs[t] && rhs[t];
                return out;
              }
              case BinaryOp::Or: {
                if (all) return Timeline(n, true);
                Timeline rhs = timeline(bin.rhs, ctx, b);
                for (std::size_t t = 0; t < n; ++t) out[t] = lhs[t] || rhs[t];
                return out;
              }
              case BinaryOp::Implies: {
                if (!any) return Timeline(n, true);
                Timeline rhs = timeline(bin.rhs, ctx, b);
                for (std::size_t t = 0; t < n; ++t) out[t] = !lhs[t] || rhs[t];
                return out;
              }
              case BinaryOp::Until: {
                Timeline rhs = timeline(bin.rhs, ctx, b);
                bool acc = false;
                for (std::size_t t = n; t-- > 0;) out[t] = acc = rhs[t] || (lhs[t] && acc);
                return out;
              }
            }
            return out;
          },
          [&](const FQuant& q) {
            bool forall = q.q == Quantifier::Forall;
            Timeline out(n, forall);
            Bindings inner = b;
            for (const auto& id : ctx.world.domain(q.sort)) {
              inner.terms[q.var] = id;
              Timeline body = timeline(q.body, ctx, inner);
              for (std::size_t t = 0; t < n; ++t) out[t] = forall ? (out[t] && body[t]) : (out[t] || body[t]);
            }
            return out;
          },
      },
      f->node);
}

}  // namespace

std::vector<bool> eval_timeline(const Formula& f, const EvalContext& ctx, const Bindings& b) {
  check_time(ctx, 0);
  return timeline(f, ctx, b);
}

bool eval_formula(const Formula& f, const EvalContext& ctx, std::size_t t, const Bindings& b) {
  check_time(ctx, t);
  return timeline(f, ctx, b)[t];
}

// ---------------------------------------------------------------------------
// Reference evaluator
// ---------------------------------------------------------------------------

bool reference_eval(const Formula& f, const EvalContext& ctx, std::size_t t, const Bindings& b) {
  check_time(ctx, t);
  const std::size_t n = ctx.trace.length();
  return std::visit(
      overloaded{
          [&](const FAtom& atom) -> bool {
            if (const RelationDef* def = defined_relation(atom, ctx)) {
              auto inner = call_bindings(*def, atom, ctx, t, b);
              return inner ? reference_eval(*def->body, ctx, t, *inner) : false;
            }
            return builtin_at(atom, ctx, t, b);
          },
          [&](const FCompare& c) -> bool { return compare_at(c, ctx, t, b); },
          [&](const FConst& c) -> bool { return c.value; },
          [&](const FFinal&) -> bool { return t == n - 1; },
          [&](const FUnary& u) -> bool {
            switch (u.op) {
              case UnaryOp::Not: return !reference_eval(u.operand, ctx, t, b);
              case UnaryOp::Next: return t + 1 < n && reference_eval(u.operand, ctx, t + 1, b);
              case UnaryOp::Always: {
                bool all = true;
                for (std::size_t k = t; k < n; ++k) all = reference_eval(u.operand, ctx, k, b) & all;
                return all;
              }
              case UnaryOp::Eventually: {
                bool some = false;
                for (std::size_t k = t; k < n; ++k) some = reference_eval(u.operand, ctx, k, b) | some;
                return some;
              }
              case UnaryOp::Before: {
                bool some = false;
                for (std::size_t k = 0; k <= t; ++k) some = reference_eval(u.operand, ctx, k, b) | some;
                return some;
              }
            }
            return false;
          },
          [&](const FBinary& bin) -> bool {
            switch (bin.op) {
              case BinaryOp::And:
                return reference_eval(bin.lhs, ctx, t, b) & reference_eval(bin.rhs, ctx, t, b);
              case BinaryOp::Or:
                return reference_eval(bin.lhs, ctx, t, b) | reference_eval(bin.rhs, ctx, t, b);
              case BinaryOp::Implies:
                return !reference_eval(bin.lhs, ctx, t, b) | reference_eval(bin.rhs, ctx, t, b);
              case BinaryOp::Until: {
                // exists k >= t: rhs at k and lhs at every j in [t, k)
                bool found = false;
                for (std::size_t k = t; k < n; ++k) {
                  bool prefix = true;
                  for (std::size_t j = t; j < k; ++j) prefix = reference_eval(bin.lhs, ctx, j, b) & prefix;
                  found = (reference_eval(bin.rhs, ctx, k, b) & prefix) | found;
                }
                return found;
              }
            }
            return false;
          },
          [&](const FQuant& q) -> bool {
            bool forall = q.q == Quantifier::Forall;
            bool acc = forall;
            for (const auto& id : ctx.world.domain(q.sort)) {
              Bindings inner = b;
              inner.terms[q.var] = id;
              bool v = reference_eval(q.body, ctx, t, inner);
              acc = forall ? (acc & v) : (acc | v);
            }
            return acc;
          },
      },
      f->node);
}

// ---------------------------------------------------------------------------
// Theory checking
// ---------------------------------------------------------------------------

bool CheckReport::satisfied() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.satisfied; });
}

void validate_binding(const Theory& theory, const World& world, const RoleBinding& binding) {
  for (const auto& role : theory.roles) {
    auto it = binding.find(role.role);
    if (it == binding.end()) {
      throw Error(ErrorCode::MissingRole, "role '" + role.role + "' of " + theory.name + " is not bound");
    }
    const EntityDecl& e = world.entity(it->second);
    if (!world.sorts().subsort_of(e.sort, role.sort)) {
      throw Error(ErrorCode::SortMismatchInBinding, "role '" + role.role + "' needs sort " + role.sort +
                                                        " but '" + e.id + "' is " + e.sort);
    }
  }
  for (const auto& [role, entity] : binding) {
    if (!theory.role(role)) {
      throw Error(ErrorCode::MissingRole, theory.name + " has no role '" + role + "'");
    }
  }
}

namespace {

Renaming display_names(const Bindings& b) {
  Renaming r;
  for (const auto& [k, v] : b.terms) r[k] = v;
  return r;
}

Witness leaf(const Formula& f, std::size_t t, const Bindings& b) {
  Renaming r = display_names(b);
  return Witness{t, f, to_text(f, &r)};
}

}  // namespace

Witness explain_failure(const Formula& f, const EvalContext& ctx, std::size_t t, const Bindings& b) {
  const std::size_t n = ctx.trace.length();
  auto holds = [&](const Formula& g, std::size_t k, const Bindings& bb) {
    return eval_formula(g, ctx, k, bb);
  };
  return std::visit(
      overloaded{
          [&](const FAtom& atom) {
            // Failures inside a defined relation are reported at the call site.
            (void)atom;
            return leaf(f, t, b);
          },
          [&](const FUnary& u) {
            switch (u.op) {
              case UnaryOp::Not: return leaf(f, t, b);
              case UnaryOp::Next:
                if (t + 1 >= n) return leaf(f, t, b);
                return explain_failure(u.operand, ctx, t + 1, b);
              case UnaryOp::Always:
                for (std::size_t k = t; k < n; ++k) {
                  if (!holds(u.operand, k, b)) return explain_failure(u.operand, ctx, k, b);
                }
                break;
              case UnaryOp::Eventually: return explain_failure(u.operand, ctx, t, b);
              case UnaryOp::Before: return explain_failure(u.operand, ctx, 0, b);
            }
            return leaf(f, t, b);
          },
          [&](const FBinary& bin) {
            switch (bin.op) {
              case BinaryOp::And:
                if (!holds(bin.lhs, t, b)) return explain_failure(bin.lhs, ctx, t, b);
                return explain_failure(bin.rhs, ctx, t, b);
              case BinaryOp::Or: return explain_failure(bin.lhs, ctx, t, b);
              case BinaryOp::Implies: return explain_failure(bin.rhs, ctx, t, b);
              case BinaryOp::Until:
                // Either the left side broke before the right side ever held,
                // or the right side never held.
                for (std::size_t k = t; k < n; ++k) {
                  if (holds(bin.rhs, k, b)) break;
                  if (!holds(bin.lhs, k, b)) return explain_failure(bin.lhs, ctx, k, b);
                }
                return explain_failure(bin.rhs, ctx, t, b);
            }
            return leaf(f, t, b);
          },
          [&](const FQuant& q) {
            auto domain = ctx.world.domain(q.sort);
            Bindings inner = b;
            if (q.q == Quantifier::Forall) {
              for (const auto& id : domain) {
                inner.terms[q.var] = id;
                if (!holds(q.body, t, inner)) return explain_failure(q.body, ctx, t, inner);
              }
            } else if (!domain.empty()) {
              inner.terms[q.var] = domain.front();
              return explain_failure(q.body, ctx, t, inner);
            }
            return leaf(f, t, b);
          },
          [&](const auto&) { return leaf(f, t, b); },
      },
      f->node);
}

CheckReport check_theory(const Theory& theory, const Environment& env, const World& world,
                         const Trace& trace, const RoleBinding& binding, const Tolerances& tol,
                         Evaluator evaluator) {
  validate_binding(theory, world, binding);
  EvalContext ctx{world, trace, env, tol};
  Bindings b;
  b.terms = binding;
  Renaming names(binding.begin(), binding.end());
  CheckReport report{theory.name, binding, {}};
  for (const auto& axiom : theory.axioms) {
    AxiomResult result;
    result.axiom = axiom;
    result.text = to_text(axiom, &names);
    result.satisfied = evaluator == Evaluator::Fast ? eval_formula(axiom, ctx, 0, b)
                                                    : reference_eval(axiom, ctx, 0, b);
    if (!result.satisfied) result.witness = explain_failure(axiom, ctx, 0, b);
    report.axioms.push_back(std::move(result));
  }
  return report;
}

}  // namespace ischema
