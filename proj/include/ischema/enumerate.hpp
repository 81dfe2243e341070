#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ischema/geometry.hpp"
#include "ischema/logic.hpp"
#include "ischema/scenario.hpp"
#include "ischema/theory.hpp"

namespace ischema {

struct GridSpec {
  Rational x0{0}, x1{0};
  Rational y0{0}, y1{0};
  Rational step{1};
  // Entities whose position varies; all others keep their scenario values.
  std::vector<std::string> free;
  std::size_t horizon = 1;
  std::uint64_t cap = 10'000'000;

  std::size_t points() const;  // grid points per free entity and instant
};

// "x0:x1,y0:y1" or "x0:x1,y0:y1,step". Throws InvalidArgument.
GridSpec parse_grid(std::string_view text);

// Point-shaped entities of the scenario, the default free set.
std::vector<std::string> default_free_entities(const Scenario& sc);

// Number of candidate traces. Throws SearchSpaceTooLarge above the cap and
// InvalidArgument for free entities without a center position.
std::uint64_t search_space(const Scenario& skeleton, const GridSpec& grid);

// Every grid trace satisfying all axioms at t = 0 (reference evaluator), in
// lexicographic order of the assignment (entity, t, x, y).
std::vector<Trace> enumerate_models(const Theory& theory, const Environment& env, const Scenario& skeleton,
                                    const GridSpec& grid, const RoleBinding& binding,
                                    const Tolerances& tol = {});

std::uint64_t count_models(const Theory& theory, const Environment& env, const Scenario& skeleton,
                           const GridSpec& grid, const RoleBinding& binding, const Tolerances& tol = {});

}  // namespace ischema
