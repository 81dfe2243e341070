#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ischema/ast.hpp"
#include "ischema/geometry.hpp"
#include "ischema/model.hpp"
#include "ischema/theory.hpp"

namespace ischema {

// Free symbols of a formula: terms map roles and variables to entity ids,
// numbers give values to numeric arguments of defined relations.
struct Bindings {
  std::map<std::string, std::string> terms;
  std::map<std::string, Number> numbers;
};

using RoleBinding = std::map<std::string, std::string>;

struct EvalContext {
  const World& world;
  const Trace& trace;
  const Environment& env;
  Tolerances tol;
};

// Finite-trace semantics with strong next, reflexive `before` and classical
// negation over the complete trace. Computes whole truth timelines bottom-up.
// Throws UnboundSymbol, TimeOutOfRange and geometry errors.
bool eval_formula(const Formula& f, const EvalContext& ctx, std::size_t t, const Bindings& b = {});

// Truth value of `f` at every instant of the trace.
std::vector<bool> eval_timeline(const Formula& f, const EvalContext& ctx, const Bindings& b = {});

// Same contract as eval_formula, written as the literal recursive expansion of
// each operator's definition with no sharing and no short-circuiting. Used as
// the oracle in tests.
bool reference_eval(const Formula& f, const EvalContext& ctx, std::size_t t, const Bindings& b = {});

enum class Evaluator { Fast, Reference };

struct Witness {
  std::size_t time = 0;
  Formula subformula;
  std::string text;  // subformula printed with roles and variables substituted
};

struct AxiomResult {
  Formula axiom;
  std::string text;
  bool satisfied = false;
  std::optional<Witness> witness;
};

struct CheckReport {
  std::string theory;
  RoleBinding binding;
  std::vector<AxiomResult> axioms;

  bool satisfied() const;
};

// Throws MissingRole, SortMismatchInBinding, UnknownEntity.
void validate_binding(const Theory& theory, const World& world, const RoleBinding& binding);

// Evaluates every axiom at t = 0 under the role binding.
CheckReport check_theory(const Theory& theory, const Environment& env, const World& world,
                         const Trace& trace, const RoleBinding& binding, const Tolerances& tol = {},
                         Evaluator evaluator = Evaluator::Fast);

// Earliest failing instant and leftmost innermost failing subformula of a
// formula that is false at `t`.
Witness explain_failure(const Formula& f, const EvalContext& ctx, std::size_t t, const Bindings& b);

}  // namespace ischema
