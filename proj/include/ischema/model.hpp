#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ischema/error.hpp"
#include "ischema/rational.hpp"

namespace ischema {

// ---------------------------------------------------------------------------
// Sorts
// ---------------------------------------------------------------------------

namespace sorts {
inline constexpr std::string_view kEntity = "Entity";
inline constexpr std::string_view kObject = "Object";
inline constexpr std::string_view kContainer = "Container";
inline constexpr std::string_view kPath = "Path";
inline constexpr std::string_view kRegion = "Region";
inline constexpr std::string_view kFloor = "Floor";
inline constexpr std::string_view kCircle = "Circle";
inline constexpr std::string_view kRectangle = "Rectangle";
}  // namespace sorts

struct Sort {
  std::string name;
  std::optional<std::string> parent;

  bool operator==(const Sort&) const = default;
};

enum class ShapeKind { Point, Circle, Rectangle, Segment, Floor };

std::string_view to_string(ShapeKind kind);
std::optional<ShapeKind> shape_from_string(std::string_view name);

// Parameter names a shape carries, in declaration order.
const std::vector<std::string>& shape_params(ShapeKind kind);
bool is_shape_param(ShapeKind kind, std::string_view param);
// True for any parameter name used by at least one shape.
bool is_geometric_param(std::string_view param);

// Forest of sorts rooted at Entity. The built-in sorts are always present;
// user sorts hang below them (single parent each).
class SortHierarchy {
 public:
  SortHierarchy();

  // Throws UnknownSort for a missing parent, SortCycle when redeclaring an
  // existing sort under a different parent.
  void add(const Sort& sort);

  bool contains(std::string_view name) const;
  // Reflexive-transitive subsort test. Throws UnknownSort.
  bool subsort_of(std::string_view s, std::string_view t) const;
  // Whether an entity of this shape may be declared at `sort`.
  bool admits(std::string_view sort, ShapeKind shape) const;
  std::vector<ShapeKind> admissible_shapes(std::string_view sort) const;

  // Sorts added on top of the built-ins, in insertion order.
  const std::vector<Sort>& user_sorts() const { return user_; }
  std::optional<std::string> parent(std::string_view name) const;

  bool operator==(const SortHierarchy& other) const { return user_ == other.user_; }

 private:
  std::map<std::string, std::optional<std::string>, std::less<>> parent_;
  std::vector<Sort> user_;
};

// Adds user sorts in dependency order, so a child may be listed before its
// parent. Throws UnknownSort for a parent that is never declared and SortCycle
// when the parent links loop.
SortHierarchy build_hierarchy(const std::vector<Sort>& user_sorts);

// Free-standing form of the subsort check over an explicit sort list, built on
// top of the built-in hierarchy.
bool subsort_of(std::string_view s, std::string_view t, const std::vector<Sort>& hierarchy);

// ---------------------------------------------------------------------------
// Entities and states
// ---------------------------------------------------------------------------

struct Param {
  std::string name;
  Rational value;

  bool operator==(const Param&) const = default;
};

// Shape parameters come first in shape order; any further entries are
// attribute parameters such as `open`.
struct EntityDecl {
  std::string id;
  std::string sort;
  ShapeKind shape = ShapeKind::Point;
  std::vector<Param> params;

  bool operator==(const EntityDecl&) const = default;
  const Rational* find(std::string_view param) const;
};

// Builds a declaration from positional shape arguments. Does not validate.
EntityDecl make_entity(std::string id, std::string sort, ShapeKind shape,
                       const std::vector<Rational>& args,
                       std::vector<Param> attributes = {});

enum class ForceMode { Active, Passive };
std::string_view to_string(ForceMode mode);

struct ForceFluent {
  std::string label;
  std::string target;
  Rational dx;
  Rational dy;
  ForceMode mode = ForceMode::Active;

  bool operator==(const ForceFluent&) const = default;
};

// Orders by (label, target): at most one fluent per label and target.
struct ForceOrder {
  bool operator()(const ForceFluent& a, const ForceFluent& b) const {
    return std::tie(a.label, a.target) < std::tie(b.label, b.target);
  }
};
using ForceSet = std::set<ForceFluent, ForceOrder>;

using ParamKey = std::pair<std::string, std::string>;

struct State {
  std::size_t time = 0;
  std::map<ParamKey, Rational> values;
  ForceSet forces;

  bool operator==(const State&) const = default;

  const Rational& at(std::string_view entity, std::string_view param) const;
  bool has(std::string_view entity, std::string_view param) const;
  bool has_force_on(std::string_view entity) const;
};

struct Trace {
  std::vector<State> states;

  std::size_t length() const { return states.size(); }
  bool operator==(const Trace&) const = default;
};

// State whose values are the declared parameter values of each entity.
State initial_state(const std::vector<EntityDecl>& entities, ForceSet forces = {});

// Validates shapes, extents, sort admissibility and id uniqueness.
// Throws DuplicateEntity, BadShapeForSort, NegativeExtent, UnknownSort.
void validate_entities(const std::vector<EntityDecl>& entities, const SortHierarchy& sorts);

// Checks T >= 1, consecutive time indices, value totality against the
// declarations, and that every force targets a declared entity.
void validate_trace(const Trace& trace, const std::vector<EntityDecl>& entities);

const EntityDecl& find_entity(const std::vector<EntityDecl>& entities, std::string_view id);

}  // namespace ischema
