#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ischema/geometry.hpp"
#include "ischema/rule.hpp"
#include "ischema/scenario.hpp"
#include "ischema/theory.hpp"

namespace ischema {

struct SimConfig {
  Rational delta{1};  // gravity step for rules that do not fix their own
  Tolerances tol;
  // Macros and parameters visible to rule conditions. May be null.
  const Environment* env = nullptr;
};

// gravity(δ): every non-Floor entity with nothing under it in contact moves
// down by δ, landing exactly on the highest surface below. Throws
// NonPositiveDelta.
Rule gravity_rule(std::optional<Rational> delta = std::nullopt);

// Removes the force `label` on `target` once `until` holds; the force itself
// is declared with the scenario.
Rule umph_rule(const std::string& label, const std::string& target, Formula until);

// Rules grouped into strata, earliest first. Rules in one stratum never read
// negatively what another rule of the same stratum writes. Throws
// UnstratifiableRuleSet and InvalidArgument (temporal condition).
std::vector<std::vector<std::size_t>> stratify(const std::vector<Rule>& rules,
                                               const Environment* env = nullptr);

// Next state. Throws ConflictingEffects, UnstratifiableRuleSet,
// UnknownParameter, NonPositiveDelta.
State step(const World& world, const State& s, const std::vector<Rule>& rules,
           const SimConfig& cfg = {});

// Trace of length `steps` (default: the scenario's horizon) starting from the
// declared initial state.
Trace simulate(const Scenario& sc, const SimConfig& cfg = {},
               std::optional<std::size_t> steps = std::nullopt);

}  // namespace ischema
