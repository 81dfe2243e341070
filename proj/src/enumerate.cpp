#include "ischema/enumerate.hpp"

#include <algorithm>
#include <functional>

namespace ischema {

namespace {

std::size_t count_steps(const Rational& lo, const Rational& hi, const Rational& step) {
  if (hi < lo) return 0;
  Rational q = (hi - lo) / step;
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return n.get_ui() + 1;
}

Rational parse_bound(std::string_view s) {
  auto v = parse_rational(s);
  if (!v) throw Error(ErrorCode::InvalidArgument, "bad grid bound '" + std::string(s) + "'");
  return *v;
}

}  // namespace

std::size_t GridSpec::points() const {
  return count_steps(x0, x1, step) * count_steps(y0, y1, step);
}

GridSpec parse_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 2 && parts.size() != 3) {
    throw Error(ErrorCode::InvalidArgument, "grid must look like x0:x1,y0:y1[,step]");
  }
  GridSpec g;
  auto range = [&](std::string_view r, Rational& lo, Rational& hi) {
    auto colon = r.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "grid range '" + std::string(r) + "' needs lo:hi");
    }
    lo = parse_bound(r.substr(0, colon));
    hi = parse_bound(r.substr(colon + 1));
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty grid range '" + std::string(r) + "'");
  };
  range(parts[0], g.x0, g.x1);
  range(parts[1], g.y0, g.y1);
  if (parts.size() == 3) {
    g.step = parse_bound(parts[2]);
    if (g.step <= 0) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  }
  return g;
}

std::vector<std::string> default_free_entities(const Scenario& sc) {
  std::vector<std::string> out;
  for (const auto& e : sc.entities) {
    if (e.shape == ShapeKind::Point) out.push_back(e.id);
  }
  return out;
}

std::uint64_t search_space(const Scenario& skeleton, const GridSpec& grid) {
  for (const auto& id : grid.free) {
    const EntityDecl& e = find_entity(skeleton.entities, id);
    if (!has_center(e.shape)) {
      throw Error(ErrorCode::InvalidArgument, "free entity '" + id + "' has no center position to vary");
    }
  }
  if (grid.horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
  mpz_class size = 1;
  mpz_class g = static_cast<unsigned long>(grid.points());
  for (std::size_t k = 0; k < grid.free.size() * grid.horizon; ++k) {
    size *= g;
    if (size > grid.cap) {
      throw Error(ErrorCode::SearchSpaceTooLarge, "search space exceeds the cap of " + std::to_string(grid.cap));
    }
  }
  return size.get_ui();
}

namespace {

// Calls `visit` on each candidate trace in assignment order; stops early if
// it returns false.
void for_each_candidate(const Scenario& skeleton, const GridSpec& grid,
                        const std::function<bool(const Trace&)>& visit) {
  search_space(skeleton, grid);
  const std::size_t ny = count_steps(grid.y0, grid.y1, grid.step);
  const std::size_t g = grid.points();
  const std::size_t slots = grid.free.size() * grid.horizon;

  Trace base;
  State s0 = skeleton.trace ? skeleton.trace->states.front() : initial_state(skeleton.entities, skeleton.forces);
  for (std::size_t t = 0; t < grid.horizon; ++t) {
    State s = skeleton.trace && t < skeleton.trace->length() ? skeleton.trace->states[t] : s0;
    s.time = t;
    base.states.push_back(std::move(s));
  }
  if (g == 0) return;
  std::vector<std::size_t> digit(slots, 0);
  Trace tr = base;
  for (;;) {
    for (std::size_t e = 0; e < grid.free.size(); ++e) {
      for (std::size_t t = 0; t < grid.horizon; ++t) {
        std::size_t p = digit[e * grid.horizon + t];
        auto& values = tr.states[t].values;
        values[{grid.free[e], "x"}] = grid.x0 + Rational(static_cast<unsigned long>(p / ny)) * grid.step;
        values[{grid.free[e], "y"}] = grid.y0 + Rational(static_cast<unsigned long>(p % ny)) * grid.step;
      }
    }
    if (!visit(tr)) return;
    // Odometer: the last slot turns fastest.
    std::size_t k = slots;
    while (k > 0) {
      --k;
      if (++digit[k] < g) break;
      digit[k] = 0;
      if (k == 0) return;
    }
    if (slots == 0) return;
  }
}

bool satisfies(const Theory& theory, const EvalContext& ctx, const Bindings& b) {
  return std::all_of(theory.axioms.begin(), theory.axioms.end(),
                     [&](const Formula& ax) { return reference_eval(ax, ctx, 0, b); });
}

}  // namespace

std::vector<Trace> enumerate_models(const Theory& theory, const Environment& env, const Scenario& skeleton,
                                    const GridSpec& grid, const RoleBinding& binding, const Tolerances& tol) {
  World world = skeleton.world();
  validate_binding(theory, world, binding);
  Bindings b;
  b.terms = binding;
  std::vector<Trace> out;
  for_each_candidate(skeleton, grid, [&](const Trace& tr) {
    EvalContext ctx{world, tr, env, tol};
    if (satisfies(theory, ctx, b)) out.push_back(tr);
    return true;
  });
  return out;
}

std::uint64_t count_models(const Theory& theory, const Environment& env, const Scenario& skeleton,
                           const GridSpec& grid, const RoleBinding& binding, const Tolerances& tol) {
  World world = skeleton.world();
  validate_binding(theory, world, binding);
  Bindings b;
  b.terms = binding;
  std::uint64_t n = 0;
  for_each_candidate(skeleton, grid, [&](const Trace& tr) {
    EvalContext ctx{world, tr, env, tol};
    if (satisfies(theory, ctx, b)) ++n;
    return true;
  });
  return n;
}

}  // namespace ischema
