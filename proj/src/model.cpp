#include "ischema/model.hpp"

#include <algorithm>
#include <array>

namespace ischema {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEntity: return "DuplicateEntity";
    case ErrorCode::BadShapeForSort: return "BadShapeForSort";
    case ErrorCode::NegativeExtent: return "NegativeExtent";
    case ErrorCode::UnknownSort: return "UnknownSort";
    case ErrorCode::SortCycle: return "SortCycle";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::CoincidentCenters: return "CoincidentCenters";
    case ErrorCode::NotMeasurable: return "NotMeasurable";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnsupportedShapePair: return "UnsupportedShapePair";
    case ErrorCode::SortMismatch: return "SortMismatch";
    case ErrorCode::UnboundSymbol: return "UnboundSymbol";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::SortMismatchInBinding: return "SortMismatchInBinding";
    case ErrorCode::MissingRole: return "MissingRole";
    case ErrorCode::ConflictingEffects: return "ConflictingEffects";
    case ErrorCode::UnstratifiableRuleSet: return "UnstratifiableRuleSet";
    case ErrorCode::NonPositiveDelta: return "NonPositiveDelta";
    case ErrorCode::UnknownSchema: return "UnknownSchema";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Point: return "point";
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Rectangle: return "rectangle";
    case ShapeKind::Segment: return "segment";
    case ShapeKind::Floor: return "floor";
  }
  return "?";
}

std::optional<ShapeKind> shape_from_string(std::string_view name) {
  for (auto kind : {ShapeKind::Point, ShapeKind::Circle, ShapeKind::Rectangle,
                    ShapeKind::Segment, ShapeKind::Floor}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

const std::vector<std::string>& shape_params(ShapeKind kind) {
  static const std::vector<std::string> point{"x", "y"};
  static const std::vector<std::string> circle{"x", "y", "r"};
  static const std::vector<std::string> rectangle{"x", "y", "w", "h"};
  static const std::vector<std::string> segment{"x1", "y1", "x2", "y2"};
  static const std::vector<std::string> floor{"y"};
  switch (kind) {
    case ShapeKind::Point: return point;
    case ShapeKind::Circle: return circle;
    case ShapeKind::Rectangle: return rectangle;
    case ShapeKind::Segment: return segment;
    case ShapeKind::Floor: return floor;
  }
  return point;
}

bool is_shape_param(ShapeKind kind, std::string_view param) {
  const auto& names = shape_params(kind);
  return std::find(names.begin(), names.end(), param) != names.end();
}

bool is_geometric_param(std::string_view param) {
  static constexpr std::array<std::string_view, 9> all{"x",  "y",  "r",  "w", "h",
                                                       "x1", "y1", "x2", "y2"};
  return std::find(all.begin(), all.end(), param) != all.end();
}

// ---------------------------------------------------------------------------

SortHierarchy::SortHierarchy() {
  parent_.emplace(std::string(sorts::kEntity), std::nullopt);
  for (auto s : {sorts::kObject, sorts::kContainer, sorts::kPath, sorts::kRegion,
                 sorts::kFloor}) {
    parent_.emplace(std::string(s), std::string(sorts::kEntity));
  }
  parent_.emplace(std::string(sorts::kCircle), std::string(sorts::kContainer));
  parent_.emplace(std::string(sorts::kRectangle), std::string(sorts::kContainer));
}

void SortHierarchy::add(const Sort& sort) {
  std::string parent = sort.parent.value_or(std::string(sorts::kEntity));
  if (!contains(parent)) {
    throw Error(ErrorCode::UnknownSort, "unknown parent sort '" + parent + "'");
  }
  if (auto it = parent_.find(sort.name); it != parent_.end()) {
    // Redeclaration is harmless when it repeats the same edge; anything else
    // would either reparent a built-in or close a cycle.
    if (it->second == parent) return;
    throw Error(ErrorCode::SortCycle,
                "sort '" + sort.name + "' is already declared with a different parent");
  }
  if (sort.name == parent) {
    throw Error(ErrorCode::SortCycle, "sort '" + sort.name + "' cannot be its own parent");
  }
  parent_.emplace(sort.name, parent);
  user_.push_back(Sort{sort.name, parent});
}

bool SortHierarchy::contains(std::string_view name) const { return parent_.contains(name); }

std::optional<std::string> SortHierarchy::parent(std::string_view name) const {
  auto it = parent_.find(name);
  if (it == parent_.end()) throw Error(ErrorCode::UnknownSort, "unknown sort '" + std::string(name) + "'");
  return it->second;
}

bool SortHierarchy::subsort_of(std::string_view s, std::string_view t) const {
  if (!contains(s)) throw Error(ErrorCode::UnknownSort, "unknown sort '" + std::string(s) + "'");
  if (!contains(t)) throw Error(ErrorCode::UnknownSort, "unknown sort '" + std::string(t) + "'");
  std::optional<std::string> cur{std::string(s)};
  while (cur) {
    if (*cur == t) return true;
    cur = parent_.find(*cur)->second;
  }
  return false;
}

std::vector<ShapeKind> SortHierarchy::admissible_shapes(std::string_view sort) const {
  if (!contains(sort)) throw Error(ErrorCode::UnknownSort, "unknown sort '" + std::string(sort) + "'");
  using enum ShapeKind;
  // Walk up to the nearest built-in ancestor; user sorts inherit its shapes.
  std::string cur(sort);
  for (;;) {
    if (cur == sorts::kEntity) return {Point, Circle, Rectangle, Segment, Floor};
    if (cur == sorts::kObject || cur == sorts::kRegion) return {Point, Circle, Rectangle};
    if (cur == sorts::kContainer) return {Circle, Rectangle};
    if (cur == sorts::kCircle) return {Circle};
    if (cur == sorts::kRectangle) return {Rectangle};
    if (cur == sorts::kPath) return {Segment};
    if (cur == sorts::kFloor) return {Floor};
    cur = *parent_.find(cur)->second;
  }
}

bool SortHierarchy::admits(std::string_view sort, ShapeKind shape) const {
  auto shapes = admissible_shapes(sort);
  return std::find(shapes.begin(), shapes.end(), shape) != shapes.end();
}

SortHierarchy build_hierarchy(const std::vector<Sort>& user_sorts) {
  SortHierarchy h;
  std::vector<Sort> pending = user_sorts;
  while (!pending.empty()) {
    std::vector<Sort> next;
    for (const auto& sort : pending) {
      if (h.contains(sort.parent.value_or(std::string(sorts::kEntity)))) {
        h.add(sort);
      } else {
        next.push_back(sort);
      }
    }
    if (next.size() == pending.size()) {
      // No progress: either a parent is missing altogether or the rest loop.
      for (const auto& sort : next) {
        const auto& parent = *sort.parent;
        bool declared = std::any_of(user_sorts.begin(), user_sorts.end(),
                                    [&](const Sort& other) { return other.name == parent; });
        if (!declared) throw Error(ErrorCode::UnknownSort, "unknown parent sort '" + parent + "'");
      }
      throw Error(ErrorCode::SortCycle, "sort declarations form a cycle through '" + next.front().name + "'");
    }
    pending = std::move(next);
  }
  return h;
}

bool subsort_of(std::string_view s, std::string_view t, const std::vector<Sort>& hierarchy) {
  return build_hierarchy(hierarchy).subsort_of(s, t);
}

// ---------------------------------------------------------------------------

const Rational* EntityDecl::find(std::string_view param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p.value;
  }
  return nullptr;
}

EntityDecl make_entity(std::string id, std::string sort, ShapeKind shape,
                       const std::vector<Rational>& args, std::vector<Param> attributes) {
  EntityDecl decl{std::move(id), std::move(sort), shape, {}};
  const auto& names = shape_params(shape);
  for (std::size_t i = 0; i < names.size() && i < args.size(); ++i) {
    decl.params.push_back(Param{names[i], args[i]});
  }
  for (auto& a : attributes) decl.params.push_back(std::move(a));
  for (auto& p : decl.params) p.value.canonicalize();
  return decl;
}

std::string_view to_string(ForceMode mode) {
  return mode == ForceMode::Active ? "active" : "passive";
}

const Rational& State::at(std::string_view entity, std::string_view param) const {
  auto it = values.find(ParamKey{std::string(entity), std::string(param)});
  if (it == values.end()) {
    throw Error(ErrorCode::UnknownParameter,
                "no parameter '" + std::string(param) + "' on entity '" + std::string(entity) + "'");
  }
  return it->second;
}

bool State::has(std::string_view entity, std::string_view param) const {
  return values.contains(ParamKey{std::string(entity), std::string(param)});
}

bool State::has_force_on(std::string_view entity) const {
  return std::any_of(forces.begin(), forces.end(),
                     [&](const ForceFluent& f) { return f.target == entity; });
}

State initial_state(const std::vector<EntityDecl>& entities, ForceSet forces) {
  State s;
  s.time = 0;
  for (const auto& e : entities) {
    for (const auto& p : e.params) s.values.emplace(ParamKey{e.id, p.name}, p.value);
  }
  s.forces = std::move(forces);
  return s;
}

const EntityDecl& find_entity(const std::vector<EntityDecl>& entities, std::string_view id) {
  for (const auto& e : entities) {
    if (e.id == id) return e;
  }
  throw Error(ErrorCode::UnknownEntity, "unknown entity '" + std::string(id) + "'");
}

void validate_entities(const std::vector<EntityDecl>& entities, const SortHierarchy& sorts) {
  std::set<std::string, std::less<>> seen;
  for (const auto& e : entities) {
    if (!seen.insert(e.id).second) {
      throw Error(ErrorCode::DuplicateEntity, "entity '" + e.id + "' declared twice");
    }
    if (!sorts.contains(e.sort)) {
      throw Error(ErrorCode::UnknownSort, "entity '" + e.id + "' has unknown sort '" + e.sort + "'");
    }
    if (!sorts.admits(e.sort, e.shape)) {
      throw Error(ErrorCode::BadShapeForSort, "a " + std::string(to_string(e.shape)) +
                                                  " cannot be declared at sort " + e.sort);
    }
    const auto& names = shape_params(e.shape);
    if (e.params.size() < names.size()) {
      throw Error(ErrorCode::InvalidArgument, "entity '" + e.id + "' is missing shape parameters");
    }
    std::set<std::string, std::less<>> param_names;
    for (std::size_t i = 0; i < e.params.size(); ++i) {
      const auto& p = e.params[i];
      if (i < names.size() && p.name != names[i]) {
        throw Error(ErrorCode::InvalidArgument,
                    "entity '" + e.id + "' parameter " + std::to_string(i) + " must be " + names[i]);
      }
      if (i >= names.size() && is_geometric_param(p.name)) {
        throw Error(ErrorCode::InvalidArgument,
                    "attribute '" + p.name + "' on entity '" + e.id + "' shadows a shape parameter");
      }
      if (!param_names.insert(p.name).second) {
        throw Error(ErrorCode::InvalidArgument,
                    "parameter '" + p.name + "' repeated on entity '" + e.id + "'");
      }
      if ((p.name == "r" || p.name == "w" || p.name == "h") && sgn(p.value) <= 0) {
        throw Error(ErrorCode::NegativeExtent,
                    "entity '" + e.id + "' needs " + p.name + " > 0, got " + format_rational(p.value));
      }
    }
  }
}

void validate_trace(const Trace& trace, const std::vector<EntityDecl>& entities) {
  if (trace.states.empty()) throw Error(ErrorCode::InvalidTrace, "a trace needs at least one state");
  std::size_t expected = 0;
  for (const auto& e : entities) expected += e.params.size();
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const auto& s = trace.states[i];
    if (s.time != i) {
      throw Error(ErrorCode::InvalidTrace, "state " + std::to_string(i) + " carries time index " +
                                               std::to_string(s.time));
    }
    if (s.values.size() != expected) {
      throw Error(ErrorCode::InvalidTrace, "state " + std::to_string(i) + " is not total");
    }
    for (const auto& e : entities) {
      for (const auto& p : e.params) {
        if (!s.has(e.id, p.name)) {
          throw Error(ErrorCode::InvalidTrace, "state " + std::to_string(i) + " misses " + e.id +
                                                   "." + p.name);
        }
        if ((p.name == "r" || p.name == "w" || p.name == "h") && sgn(s.at(e.id, p.name)) <= 0) {
          throw Error(ErrorCode::NegativeExtent, "state " + std::to_string(i) + ": " + e.id + "." +
                                                     p.name + " must be positive");
        }
      }
    }
    for (const auto& f : s.forces) {
      find_entity(entities, f.target);
    }
  }
}

}  // namespace ischema
