#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ischema/geometry.hpp"
#include "ischema/model.hpp"
#include "ischema/rule.hpp"

namespace ischema {

// Either concrete (a trace) or generative (rules plus a horizon).
struct Scenario {
  std::string name;
  std::vector<Sort> sorts;
  std::vector<EntityDecl> entities;
  ForceSet forces;  // forces present at t = 0
  std::optional<Trace> trace;
  std::optional<std::vector<Rule>> rules;
  std::optional<std::size_t> horizon;

  bool generative() const { return rules.has_value(); }
  SortHierarchy hierarchy() const;
  World world() const;
};

bool equal(const Scenario& a, const Scenario& b);

// Validates entities, forces and the trace-or-rules tail. Generative
// scenarios get no trace; their state 0 is initial_state(entities, forces).
// Throws DuplicateEntity, BadShapeForSort, NegativeExtent, UnknownSort,
// SortCycle, UnknownEntity, UnknownParameter, InvalidTrace, InvalidArgument.
Scenario declare_scenario(Scenario sc);

// Copy of the scenario with every entity's position moved by (dx, dy) in every
// state. Extents and attributes are untouched.
Scenario translate(const Scenario& sc, const Rational& dx, const Rational& dy);

}  // namespace ischema
