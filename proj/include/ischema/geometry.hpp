#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ischema/ast.hpp"
#include "ischema/model.hpp"

namespace ischema {

// Coincidence tolerance for contact/on. Kept as an exact rational so every
// built-in relation is decided without floating point.
struct Tolerances {
  Rational epsilon{1, 1000000000};
};

// Result of a numeric expression: exact unless a square root or an angle was
// involved.
class Number {
 public:
  Number() = default;
  Number(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  static Number real(double value) {
    Number n;
    n.value_ = value;
    return n;
  }

  bool exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }
  double to_double() const;

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator-(const Number& a);

  std::string to_string() const;

 private:
  std::variant<Rational, double> value_{Rational(0)};
};

Number power(const Number& base, unsigned exponent);

// Exact when both sides are exact. Otherwise compared as doubles, with = and
// != decided within epsilon.
bool compare(const Number& lhs, CmpOp op, const Number& rhs, const Tolerances& tol);

// Entities of a scenario with an id index and the sort hierarchy they were
// declared against.
class World {
 public:
  World() = default;
  World(std::vector<EntityDecl> entities, SortHierarchy sorts);

  const std::vector<EntityDecl>& entities() const { return entities_; }
  const SortHierarchy& sorts() const { return sorts_; }
  const EntityDecl& entity(std::string_view id) const;
  bool has_entity(std::string_view id) const;
  // Entities whose declared sort is a subsort of `sort`, in declaration order.
  std::vector<std::string> domain(std::string_view sort) const;

 private:
  std::vector<EntityDecl> entities_;
  SortHierarchy sorts_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Concrete geometry of one entity at one state.
struct Shape {
  ShapeKind kind = ShapeKind::Point;
  Rational x, y, r, w, h, x1, y1, x2, y2;
};

Shape shape_at(const World& world, const State& state, std::string_view id);

bool has_center(ShapeKind kind);
Rational bottom(const Shape& s);
Rational top(const Shape& s);

// Area as q + k*pi so circles and rectangles compare exactly.
struct Area {
  Rational rational;
  Rational pi_coefficient;
};
Area area(const Shape& s);  // throws NotMeasurable for Floor
int compare_areas(const Area& a, const Area& b);  // -1, 0, 1

// Squared distance as used by delta(): center to center, or nearest point of
// a Segment/Floor to the other's center, or nearest points of two linear
// shapes.
Rational squared_distance(const Shape& a, const Shape& b);

// ---------------------------------------------------------------------------
// Spatial relations between shapes (ids are only needed for on/self checks)
// ---------------------------------------------------------------------------

bool inside(const Shape& a, const Shape& b);
bool part_of(const Shape& a, const Shape& b);
bool contact(const Shape& a, const Shape& b, const Tolerances& tol);
bool intersects(const Shape& a, const Shape& b);
bool overlaps(const Shape& a, const Shape& b, const Tolerances& tol);
bool disjoint(const Shape& a, const Shape& b, const Tolerances& tol);
bool on(const Shape& a, const Shape& b, const Tolerances& tol);
bool close_to(const Shape& a, const Shape& b, const Number& threshold);

// Height of the highest surface directly below `id` (tops at or under its
// bottom, horizontally overlapping), if any.
std::optional<Rational> support_height(const World& world, const State& state, std::string_view id);

// ---------------------------------------------------------------------------
// Entity-level operations
// ---------------------------------------------------------------------------

Number distance(const World& world, const State& state, std::string_view a, std::string_view b);
double angular_position(const World& world, const State& state, std::string_view x,
                        std::string_view y);
Number measure(const World& world, const State& state, std::string_view e);

struct RelationArity {
  std::size_t entities;
  std::size_t numerics;
};

bool is_builtin_relation(std::string_view name);
std::optional<RelationArity> builtin_arity(std::string_view name);
std::span<const std::string_view> builtin_relation_names();

// Truth of a built-in relation. Throws UnknownRelation, UnknownEntity and
// NotMeasurable (size relations on a Floor).
bool eval_relation(std::string_view name, std::span<const std::string> args,
                   std::span<const Number> numeric, const World& world, const State& state,
                   const Tolerances& tol);

// ---------------------------------------------------------------------------
// Numeric expressions
// ---------------------------------------------------------------------------

// next() moves to the following state; at the last state there is none.
struct NoNextState {};

struct NumContext {
  const World& world;
  const std::vector<State>& states;
  std::size_t time;
  // Maps a term (role, variable, entity id) to an entity id.
  std::function<std::string(const Term&)> resolve_term;
  // Value of a bare identifier (theory parameter, definition argument).
  std::function<Number(const std::string&)> resolve_symbol;
};

// Throws UnknownParameter, UnboundSymbol, NoNextState.
Number eval_num(const NumExpr& e, const NumContext& ctx);

// Single-state convenience: terms are entity ids and no symbols are defined.
Number eval_num(const NumExpr& e, const World& world, const State& state);

}  // namespace ischema
