#include "ischema/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace ischema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Rational abs_q(const Rational& v) { return sgn(v) < 0 ? Rational(-v) : v; }
Rational max_q(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min_q(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational sq(const Rational& v) { return v * v; }

bool is_round(ShapeKind k) { return k == ShapeKind::Point || k == ShapeKind::Circle; }
Rational radius(const Shape& s) { return s.kind == ShapeKind::Circle ? s.r : Rational(0); }

// |d - s| <= eps given d^2, with s >= 0 and everything exact.
bool distance_within(const Rational& d2, const Rational& s, const Rational& eps) {
  Rational hi = s + eps;
  Rational lo = s - eps;
  return d2 <= hi * hi && (sgn(lo) <= 0 || d2 >= lo * lo);
}

Rational sqdist_point_point(const Rational& ax, const Rational& ay, const Rational& bx,
                            const Rational& by) {
  return sq(ax - bx) + sq(ay - by);
}

Rational sqdist_point_segment(const Rational& px, const Rational& py, const Shape& seg) {
  Rational vx = seg.x2 - seg.x1;
  Rational vy = seg.y2 - seg.y1;
  Rational len2 = sq(vx) + sq(vy);
  if (sgn(len2) == 0) return sqdist_point_point(px, py, seg.x1, seg.y1);
  Rational t = ((px - seg.x1) * vx + (py - seg.y1) * vy) / len2;
  t = max_q(Rational(0), min_q(Rational(1), t));
  return sqdist_point_point(px, py, seg.x1 + t * vx, seg.y1 + t * vy);
}

Rational sqdist_point_rect(const Rational& px, const Rational& py, const Shape& rect) {
  Rational dx = max_q(abs_q(px - rect.x) - rect.w / 2, Rational(0));
  Rational dy = max_q(abs_q(py - rect.y) - rect.h / 2, Rational(0));
  return sq(dx) + sq(dy);
}

bool point_strictly_in_rect(const Rational& px, const Rational& py, const Shape& rect) {
  return abs_q(px - rect.x) < rect.w / 2 && abs_q(py - rect.y) < rect.h / 2;
}

int orientation(const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by,
                const Rational& cx, const Rational& cy) {
  return sgn((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

bool on_segment_box(const Rational& px, const Rational& py, const Shape& s) {
  return min_q(s.x1, s.x2) <= px && px <= max_q(s.x1, s.x2) && min_q(s.y1, s.y2) <= py &&
         py <= max_q(s.y1, s.y2);
}

bool segments_intersect(const Shape& a, const Shape& b) {
  int o1 = orientation(a.x1, a.y1, a.x2, a.y2, b.x1, b.y1);
  int o2 = orientation(a.x1, a.y1, a.x2, a.y2, b.x2, b.y2);
  int o3 = orientation(b.x1, b.y1, b.x2, b.y2, a.x1, a.y1);
  int o4 = orientation(b.x1, b.y1, b.x2, b.y2, a.x2, a.y2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_box(b.x1, b.y1, a)) return true;
  if (o2 == 0 && on_segment_box(b.x2, b.y2, a)) return true;
  if (o3 == 0 && on_segment_box(a.x1, a.y1, b)) return true;
  if (o4 == 0 && on_segment_box(a.x2, a.y2, b)) return true;
  return false;
}

Rational sqdist_segment_segment(const Shape& a, const Shape& b) {
  if (segments_intersect(a, b)) return Rational(0);
  return std::min({sqdist_point_segment(a.x1, a.y1, b), sqdist_point_segment(a.x2, a.y2, b),
                   sqdist_point_segment(b.x1, b.y1, a), sqdist_point_segment(b.x2, b.y2, a)});
}

// Parametric clip of the segment against the box, open or closed. The set of
// t in [0,1] that lands in the box is an interval; report whether it is
// non-empty.
bool segment_hits_rect(const Shape& seg, const Shape& rect, bool open) {
  Rational lower(0);
  Rational upper(1);
  auto clip = [&](const Rational& start, const Rational& dir, const Rational& lo,
                  const Rational& hi) {
    if (sgn(dir) == 0) return open ? (lo < start && start < hi) : (lo <= start && start <= hi);
    Rational t0 = (lo - start) / dir;
    Rational t1 = (hi - start) / dir;
    if (t0 > t1) std::swap(t0, t1);
    lower = max_q(lower, t0);
    upper = min_q(upper, t1);
    return true;
  };
  if (!clip(seg.x1, seg.x2 - seg.x1, rect.x - rect.w / 2, rect.x + rect.w / 2)) return false;
  if (!clip(seg.y1, seg.y2 - seg.y1, rect.y - rect.h / 2, rect.y + rect.h / 2)) return false;
  return open ? lower < upper : lower <= upper;
}

Rational sqdist_segment_rect(const Shape& seg, const Shape& rect) {
  if (segment_hits_rect(seg, rect, false)) return Rational(0);
  Rational best = min_q(sqdist_point_rect(seg.x1, seg.y1, rect), sqdist_point_rect(seg.x2, seg.y2, rect));
  Rational hw = rect.w / 2;
  Rational hh = rect.h / 2;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      best = min_q(best, sqdist_point_segment(rect.x + sx * hw, rect.y + sy * hh, seg));
    }
  }
  return best;
}

struct Interval {
  Rational lo;
  Rational hi;
  bool unbounded = false;
};

Interval x_interval(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::Point: return {s.x, s.x};
    case ShapeKind::Circle: return {s.x - s.r, s.x + s.r};
    case ShapeKind::Rectangle: return {s.x - s.w / 2, s.x + s.w / 2};
    case ShapeKind::Segment: return {min_q(s.x1, s.x2), max_q(s.x1, s.x2)};
    case ShapeKind::Floor: return {Rational(0), Rational(0), true};
  }
  return {};
}

bool x_overlap(const Shape& a, const Shape& b) {
  Interval ia = x_interval(a);
  Interval ib = x_interval(b);
  if (ia.unbounded || ib.unbounded) return true;
  return max_q(ia.lo, ib.lo) <= min_q(ia.hi, ib.hi);
}

bool point_in(const Shape& container, const Rational& px, const Rational& py, bool strict) {
  if (container.kind == ShapeKind::Circle) {
    Rational d2 = sqdist_point_point(px, py, container.x, container.y);
    return strict ? d2 < sq(container.r) : d2 <= sq(container.r);
  }
  Rational dx = abs_q(px - container.x);
  Rational dy = abs_q(py - container.y);
  return strict ? (dx < container.w / 2 && dy < container.h / 2)
                : (dx <= container.w / 2 && dy <= container.h / 2);
}

bool contained(const Shape& a, const Shape& b, bool strict) {
  if (b.kind != ShapeKind::Circle && b.kind != ShapeKind::Rectangle) return false;
  switch (a.kind) {
    case ShapeKind::Floor: return false;
    case ShapeKind::Point: return point_in(b, a.x, a.y, strict);
    case ShapeKind::Segment: return point_in(b, a.x1, a.y1, strict) && point_in(b, a.x2, a.y2, strict);
    case ShapeKind::Circle:
      if (b.kind == ShapeKind::Circle) {
        bool smaller = strict ? a.r < b.r : a.r <= b.r;
        return smaller && sqdist_point_point(a.x, a.y, b.x, b.y) <= sq(b.r - a.r);
      }
      return abs_q(a.x - b.x) + a.r <= b.w / 2 && abs_q(a.y - b.y) + a.r <= b.h / 2;
    case ShapeKind::Rectangle:
      if (b.kind == ShapeKind::Rectangle) {
        bool fits = abs_q(a.x - b.x) + a.w / 2 <= b.w / 2 && abs_q(a.y - b.y) + a.h / 2 <= b.h / 2;
        return fits && (!strict || a.w < b.w || a.h < b.h);
      }
      for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
          Rational cx = a.x + sx * a.w / 2;
          Rational cy = a.y + sy * a.h / 2;
          if (sqdist_point_point(cx, cy, b.x, b.y) > sq(b.r)) return false;
        }
      }
      return true;
  }
  return false;
}

// Normalizes the pair so the "simpler" shape comes first for the symmetric
// relations.
int rank(ShapeKind k) {
  switch (k) {
    case ShapeKind::Point: return 0;
    case ShapeKind::Circle: return 1;
    case ShapeKind::Rectangle: return 2;
    case ShapeKind::Segment: return 3;
    case ShapeKind::Floor: return 4;
  }
  return 0;
}

// pi to 35 digits, bracketed.
const Rational& pi_lower() {
  static const Rational v = *parse_rational("3.14159265358979323846264338327950288");
  return v;
}
const Rational& pi_upper() {
  static const Rational v = *parse_rational("3.14159265358979323846264338327950289");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Number
// ---------------------------------------------------------------------------

double Number::to_double() const {
  return exact() ? rational().get_d() : std::get<double>(value_);
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return Number(Rational(a.rational() + b.rational()));
  return Number::real(a.to_double() + b.to_double());
}
Number operator-(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return Number(Rational(a.rational() - b.rational()));
  return Number::real(a.to_double() - b.to_double());
}
Number operator*(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return Number(Rational(a.rational() * b.rational()));
  return Number::real(a.to_double() * b.to_double());
}
Number operator-(const Number& a) {
  if (a.exact()) return Number(Rational(-a.rational()));
  return Number::real(-a.to_double());
}

std::string Number::to_string() const {
  if (exact()) return format_rational(rational());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

Number power(const Number& base, unsigned exponent) {
  Number result(Rational(1));
  for (unsigned i = 0; i < exponent; ++i) result = result * base;
  return result;
}

bool compare(const Number& lhs, CmpOp op, const Number& rhs, const Tolerances& tol) {
  if (lhs.exact() && rhs.exact()) {
    const Rational& a = lhs.rational();
    const Rational& b = rhs.rational();
    switch (op) {
      case CmpOp::Lt: return a < b;
      case CmpOp::Le: return a <= b;
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      case CmpOp::Ge: return a >= b;
      case CmpOp::Gt: return a > b;
    }
  }
  double a = lhs.to_double();
  double b = rhs.to_double();
  double eps = tol.epsilon.get_d();
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return std::fabs(a - b) <= eps;
    case CmpOp::Ne: return std::fabs(a - b) > eps;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
  }
  return false;
}

// ---------------------------------------------------------------------------
// World
// ---------------------------------------------------------------------------

World::World(std::vector<EntityDecl> entities, SortHierarchy sorts)
    : entities_(std::move(entities)), sorts_(std::move(sorts)) {
  for (std::size_t i = 0; i < entities_.size(); ++i) index_.emplace(entities_[i].id, i);
}

const EntityDecl& World::entity(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw Error(ErrorCode::UnknownEntity, "unknown entity '" + std::string(id) + "'");
  return entities_[it->second];
}

bool World::has_entity(std::string_view id) const { return index_.contains(std::string(id)); }

std::vector<std::string> World::domain(std::string_view sort) const {
  std::vector<std::string> ids;
  for (const auto& e : entities_) {
    if (sorts_.subsort_of(e.sort, sort)) ids.push_back(e.id);
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Shapes
// ---------------------------------------------------------------------------

Shape shape_at(const World& world, const State& state, std::string_view id) {
  const EntityDecl& decl = world.entity(id);
  Shape s;
  s.kind = decl.shape;
  auto get = [&](const char* p) { return state.at(id, p); };
  switch (decl.shape) {
    case ShapeKind::Point: s.x = get("x"); s.y = get("y"); break;
    case ShapeKind::Circle: s.x = get("x"); s.y = get("y"); s.r = get("r"); break;
    case ShapeKind::Rectangle:
      s.x = get("x"); s.y = get("y"); s.w = get("w"); s.h = get("h");
      break;
    case ShapeKind::Segment:
      s.x1 = get("x1"); s.y1 = get("y1"); s.x2 = get("x2"); s.y2 = get("y2");
      break;
    case ShapeKind::Floor: s.y = get("y"); break;
  }
  return s;
}

bool has_center(ShapeKind kind) {
  return kind == ShapeKind::Point || kind == ShapeKind::Circle || kind == ShapeKind::Rectangle;
}

Rational bottom(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::Point:
    case ShapeKind::Floor: return s.y;
    case ShapeKind::Circle: return s.y - s.r;
    case ShapeKind::Rectangle: return s.y - s.h / 2;
    case ShapeKind::Segment: return min_q(s.y1, s.y2);
  }
  return s.y;
}

Rational top(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::Point:
    case ShapeKind::Floor: return s.y;
    case ShapeKind::Circle: return s.y + s.r;
    case ShapeKind::Rectangle: return s.y + s.h / 2;
    case ShapeKind::Segment: return max_q(s.y1, s.y2);
  }
  return s.y;
}

Area area(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::Point:
    case ShapeKind::Segment: return {Rational(0), Rational(0)};
    case ShapeKind::Circle: return {Rational(0), sq(s.r)};
    case ShapeKind::Rectangle: return {s.w * s.h, Rational(0)};
    case ShapeKind::Floor: break;
  }
  throw Error(ErrorCode::NotMeasurable, "a floor has no measurable size");
}

int compare_areas(const Area& a, const Area& b) {
  // sign of q + k*pi
  Rational q = a.rational - b.rational;
  Rational k = a.pi_coefficient - b.pi_coefficient;
  if (sgn(k) == 0) return sgn(q);
  if (sgn(q) == 0 || sgn(q) == sgn(k)) return sgn(k);
  Rational aq = abs_q(q);
  Rational ak = abs_q(k);
  if (ak * pi_lower() > aq) return sgn(k);
  if (ak * pi_upper() < aq) return sgn(q);
  long double v = q.get_d() + k.get_d() * std::numbers::pi_v<long double>;
  return v < 0 ? -1 : (v > 0 ? 1 : 0);
}

Rational squared_distance(const Shape& a, const Shape& b) {
  bool ca = has_center(a.kind);
  bool cb = has_center(b.kind);
  if (ca && cb) return sqdist_point_point(a.x, a.y, b.x, b.y);
  if (!ca && cb) return squared_distance(b, a);
  if (ca) {
    if (b.kind == ShapeKind::Segment) return sqdist_point_segment(a.x, a.y, b);
    return sq(a.y - b.y);  // floor
  }
  if (a.kind == ShapeKind::Floor && b.kind == ShapeKind::Floor) return sq(a.y - b.y);
  if (a.kind == ShapeKind::Segment && b.kind == ShapeKind::Segment) return sqdist_segment_segment(a, b);
  const Shape& seg = a.kind == ShapeKind::Segment ? a : b;
  const Shape& fl = a.kind == ShapeKind::Floor ? a : b;
  if (min_q(seg.y1, seg.y2) <= fl.y && fl.y <= max_q(seg.y1, seg.y2)) return Rational(0);
  return min_q(sq(seg.y1 - fl.y), sq(seg.y2 - fl.y));
}

bool inside(const Shape& a, const Shape& b) { return contained(a, b, true); }
bool part_of(const Shape& a, const Shape& b) { return contained(a, b, false); }

bool contact(const Shape& a, const Shape& b, const Tolerances& tol) {
  if (rank(a.kind) > rank(b.kind)) return contact(b, a, tol);
  const Rational& eps = tol.epsilon;
  if (b.kind == ShapeKind::Floor) {
    Rational base = a.kind == ShapeKind::Floor ? a.y : bottom(a);
    return abs_q(base - b.y) <= eps;
  }
  if (is_round(a.kind)) {
    Rational ra = radius(a);
    switch (b.kind) {
      case ShapeKind::Point:
      case ShapeKind::Circle:
        return distance_within(sqdist_point_point(a.x, a.y, b.x, b.y), ra + radius(b), eps);
      case ShapeKind::Rectangle:
        if (point_strictly_in_rect(a.x, a.y, b)) return false;
        return distance_within(sqdist_point_rect(a.x, a.y, b), ra, eps);
      case ShapeKind::Segment:
        return distance_within(sqdist_point_segment(a.x, a.y, b), ra, eps);
      default: break;
    }
  }
  if (a.kind == ShapeKind::Rectangle && b.kind == ShapeKind::Rectangle) {
    Rational sw = (a.w + b.w) / 2;
    Rational sh = (a.h + b.h) / 2;
    Rational dx = abs_q(a.x - b.x);
    Rational dy = abs_q(a.y - b.y);
    if (dx < sw && dy < sh) return false;  // interiors overlap
    Rational gx = max_q(dx - sw, Rational(0));
    Rational gy = max_q(dy - sh, Rational(0));
    return sq(gx) + sq(gy) <= sq(eps);
  }
  if (a.kind == ShapeKind::Rectangle && b.kind == ShapeKind::Segment) {
    if (segment_hits_rect(b, a, true)) return false;
    return sqdist_segment_rect(b, a) <= sq(eps);
  }
  // segment / segment
  return sqdist_segment_segment(a, b) <= sq(eps);
}

bool intersects(const Shape& a, const Shape& b) {
  if (rank(a.kind) > rank(b.kind)) return intersects(b, a);
  if (b.kind == ShapeKind::Floor) {
    if (a.kind == ShapeKind::Floor) return a.y == b.y;
    return bottom(a) <= b.y && b.y <= top(a);
  }
  if (is_round(a.kind)) {
    Rational ra = radius(a);
    switch (b.kind) {
      case ShapeKind::Point:
      case ShapeKind::Circle:
        return sqdist_point_point(a.x, a.y, b.x, b.y) <= sq(ra + radius(b));
      case ShapeKind::Rectangle: return sqdist_point_rect(a.x, a.y, b) <= sq(ra);
      case ShapeKind::Segment: return sqdist_point_segment(a.x, a.y, b) <= sq(ra);
      default: break;
    }
  }
  if (a.kind == ShapeKind::Rectangle && b.kind == ShapeKind::Rectangle) {
    return abs_q(a.x - b.x) <= (a.w + b.w) / 2 && abs_q(a.y - b.y) <= (a.h + b.h) / 2;
  }
  if (a.kind == ShapeKind::Rectangle) return segment_hits_rect(b, a, false);
  return segments_intersect(a, b);
}

bool overlaps(const Shape& a, const Shape& b, const Tolerances& tol) {
  return intersects(a, b) && !contact(a, b, tol) && !inside(a, b) && !inside(b, a);
}

bool disjoint(const Shape& a, const Shape& b, const Tolerances& tol) {
  return !inside(a, b) && !inside(b, a) && !contact(a, b, tol) && !overlaps(a, b, tol);
}

bool on(const Shape& a, const Shape& b, const Tolerances& tol) {
  if (a.kind == ShapeKind::Floor) return false;
  return contact(a, b, tol) && bottom(a) >= top(b) - tol.epsilon && x_overlap(a, b);
}

bool close_to(const Shape& a, const Shape& b, const Number& threshold) {
  Rational d2 = squared_distance(a, b);
  if (threshold.exact()) {
    const Rational& t = threshold.rational();
    return sgn(t) >= 0 && d2 <= t * t;
  }
  return std::sqrt(d2.get_d()) <= threshold.to_double();
}

std::optional<Rational> support_height(const World& world, const State& state, std::string_view id) {
  Shape self = shape_at(world, state, id);
  Rational base = bottom(self);
  std::optional<Rational> best;
  for (const auto& e : world.entities()) {
    if (e.id == id) continue;
    Shape other = shape_at(world, state, e.id);
    Rational surface = top(other);
    if (surface <= base && x_overlap(self, other) && (!best || *best < surface)) best = surface;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Entity-level operations
// ---------------------------------------------------------------------------

Number distance(const World& world, const State& state, std::string_view a, std::string_view b) {
  Rational d2 = squared_distance(shape_at(world, state, a), shape_at(world, state, b));
  if (auto root = exact_sqrt(d2)) return Number(*root);
  return Number::real(std::sqrt(d2.get_d()));
}

double angular_position(const World& world, const State& state, std::string_view x,
                        std::string_view y) {
  Shape sx = shape_at(world, state, x);
  Shape sy = shape_at(world, state, y);
  if (!has_center(sx.kind) || !has_center(sy.kind)) {
    throw Error(ErrorCode::UnsupportedShapePair,
                "theta needs two center-bearing entities, got " + std::string(x) + " and " + std::string(y));
  }
  Rational dx = sx.x - sy.x;
  Rational dy = sx.y - sy.y;
  if (sgn(dx) == 0 && sgn(dy) == 0) {
    throw Error(ErrorCode::CoincidentCenters,
                "theta(" + std::string(x) + "," + std::string(y) + ") is undefined for coincident centers");
  }
  double angle = std::atan2(dy.get_d(), dx.get_d());
  return angle <= -std::numbers::pi ? std::numbers::pi : angle;
}

Number measure(const World& world, const State& state, std::string_view e) {
  Area a = area(shape_at(world, state, e));
  if (sgn(a.pi_coefficient) == 0) return Number(a.rational);
  return Number::real(a.rational.get_d() + a.pi_coefficient.get_d() * std::numbers::pi);
}

namespace {

constexpr std::array<std::string_view, 11> kBuiltins{
    "inside", "partOf", "contact", "on",      "overlaps", "disjoint",
    "closeTo", "smaller", "larger", "forced", "fits"};

}  // namespace

std::span<const std::string_view> builtin_relation_names() { return kBuiltins; }

bool is_builtin_relation(std::string_view name) {
  return std::find(kBuiltins.begin(), kBuiltins.end(), name) != kBuiltins.end();
}

std::optional<RelationArity> builtin_arity(std::string_view name) {
  if (!is_builtin_relation(name)) return std::nullopt;
  if (name == "forced") return RelationArity{1, 0};
  if (name == "closeTo") return RelationArity{2, 1};
  return RelationArity{2, 0};
}

bool eval_relation(std::string_view name, std::span<const std::string> args,
                   std::span<const Number> numeric, const World& world, const State& state,
                   const Tolerances& tol) {
  auto arity = builtin_arity(name);
  if (!arity) throw Error(ErrorCode::UnknownRelation, "unknown relation '" + std::string(name) + "'");
  if (args.size() != arity->entities || numeric.size() != arity->numerics) {
    throw Error(ErrorCode::InvalidArgument, "relation '" + std::string(name) + "' expects " +
                                                std::to_string(arity->entities) + " entities and " +
                                                std::to_string(arity->numerics) + " numeric arguments");
  }
  if (name == "forced") {
    world.entity(args[0]);
    return state.has_force_on(args[0]);
  }
  Shape a = shape_at(world, state, args[0]);
  Shape b = shape_at(world, state, args[1]);
  if (name == "inside") return inside(a, b);
  if (name == "partOf") return part_of(a, b);
  if (name == "contact") return contact(a, b, tol);
  if (name == "on") return args[0] != args[1] && on(a, b, tol);
  if (name == "overlaps") return overlaps(a, b, tol);
  if (name == "disjoint") return disjoint(a, b, tol);
  if (name == "closeTo") return close_to(a, b, numeric[0]);
  if (name == "smaller") return compare_areas(area(a), area(b)) < 0;
  if (name == "larger") return compare_areas(area(a), area(b)) > 0;
  // fits(o, c): o's area plus what already sits inside c stays below c's area.
  Area used = area(a);
  for (const auto& e : world.entities()) {
    if (e.id == args[0] || e.id == args[1]) continue;
    Shape other = shape_at(world, state, e.id);
    if (other.kind == ShapeKind::Floor || !inside(other, b)) continue;
    Area more = area(other);
    used.rational += more.rational;
    used.pi_coefficient += more.pi_coefficient;
  }
  return compare_areas(used, area(b)) < 0;
}

// ---------------------------------------------------------------------------
// Numeric expressions
// ---------------------------------------------------------------------------

Number eval_num(const NumExpr& e, const NumContext& ctx) {
  const State& state = ctx.states.at(ctx.time);
  return std::visit(
      overloaded{
          [](const NumConst& c) { return Number(c.value); },
          [&](const NumParamRef& p) {
            std::string id = ctx.resolve_term(p.entity);
            return Number(state.at(id, p.param));
          },
          [&](const NumSymbol& s) { return ctx.resolve_symbol(s.name); },
          [&](const NumBinary& b) {
            Number lhs = eval_num(b.lhs, ctx);
            Number rhs = eval_num(b.rhs, ctx);
            switch (b.op) {
              case ArithOp::Add: return lhs + rhs;
              case ArithOp::Sub: return lhs - rhs;
              case ArithOp::Mul: return lhs * rhs;
            }
            return lhs;
          },
          [&](const NumNeg& n) { return -eval_num(n.operand, ctx); },
          [&](const NumPow& p) { return power(eval_num(p.base, ctx), p.exponent); },
          [&](const NumDelta& d) {
            return distance(ctx.world, state, ctx.resolve_term(d.a), ctx.resolve_term(d.b));
          },
          [&](const NumTheta& d) {
            return Number::real(
                angular_position(ctx.world, state, ctx.resolve_term(d.a), ctx.resolve_term(d.b)));
          },
          [&](const NumMeasure& m) { return measure(ctx.world, state, ctx.resolve_term(m.a)); },
          [&](const NumNext& n) {
            if (ctx.time + 1 >= ctx.states.size()) throw NoNextState{};
            NumContext later = ctx;
            later.time = ctx.time + 1;
            return eval_num(n.operand, later);
          },
      },
      e->node);
}

Number eval_num(const NumExpr& e, const World& world, const State& state) {
  std::vector<State> states{state};
  NumContext ctx{world, states, 0,
                 [&](const Term& t) {
                   world.entity(t.name);
                   return t.name;
                 },
                 [](const std::string& name) -> Number {
                   throw Error(ErrorCode::UnboundSymbol, "unbound numeric symbol '" + name + "'");
                 }};
  return eval_num(e, ctx);
}

}  // namespace ischema
