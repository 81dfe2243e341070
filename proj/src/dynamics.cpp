#include "ischema/dynamics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ischema/logic.hpp"

namespace ischema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool equal_opt(const std::optional<Formula>& a, const std::optional<Formula>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || equal(*a, *b);
}

}  // namespace

bool equal(const Effect& a, const Effect& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const SetParam& x) {
            const auto& y = std::get<SetParam>(b);
            return x.target == y.target && x.param == y.param && equal(x.value, y.value);
          },
          [&](const DeltaParam& x) {
            const auto& y = std::get<DeltaParam>(b);
            return x.target == y.target && x.param == y.param && equal(x.amount, y.amount) &&
                   x.clamp_to_support == y.clamp_to_support;
          },
          [&](const AddForce& x) {
            const auto& y = std::get<AddForce>(b);
            return x.label == y.label && x.target == y.target && x.dx == y.dx && x.dy == y.dy &&
                   x.mode == y.mode;
          },
          [&](const RemoveForce& x) {
            const auto& y = std::get<RemoveForce>(b);
            return x.label == y.label && x.target == y.target;
          },
      },
      a);
}

bool equal(const Rule& a, const Rule& b) {
  if (a.name != b.name || a.scope != b.scope || a.kind != b.kind || a.delta != b.delta ||
      a.force_label != b.force_label || a.force_target != b.force_target ||
      a.effects.size() != b.effects.size() || !equal(a.condition, b.condition) ||
      !equal_opt(a.until, b.until)) {
    return false;
  }
  for (std::size_t i = 0; i < a.effects.size(); ++i) {
    if (!equal(a.effects[i], b.effects[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

SortHierarchy Scenario::hierarchy() const { return build_hierarchy(sorts); }

World Scenario::world() const { return World(entities, hierarchy()); }

bool equal(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.sorts != b.sorts || a.entities != b.entities || a.forces != b.forces ||
      a.trace != b.trace || a.horizon != b.horizon || a.rules.has_value() != b.rules.has_value()) {
    return false;
  }
  if (a.rules) {
    if (a.rules->size() != b.rules->size()) return false;
    for (std::size_t i = 0; i < a.rules->size(); ++i) {
      if (!equal((*a.rules)[i], (*b.rules)[i])) return false;
    }
  }
  return true;
}

namespace {

void check_target(const World& world, const Term& target, const std::string& param,
                  const std::optional<RuleScope>& scope) {
  if (scope && target.name == scope->var) return;  // checked per entity while stepping
  const EntityDecl& e = world.entity(target.name);
  if (!e.find(param)) {
    throw Error(ErrorCode::UnknownParameter, "entity '" + e.id + "' has no parameter '" + param + "'");
  }
}

void check_rule(const World& world, const Rule& rule) {
  if (rule.scope) {
    world.sorts().subsort_of(rule.scope->sort, rule.scope->sort);
    for (const auto& s : rule.scope->except) world.sorts().subsort_of(s, s);
  }
  for (const auto& eff : rule.effects) {
    std::visit(overloaded{
                   [&](const SetParam& e) { check_target(world, e.target, e.param, rule.scope); },
                   [&](const DeltaParam& e) { check_target(world, e.target, e.param, rule.scope); },
                   [&](const AddForce& e) {
                     if (!(rule.scope && e.target.name == rule.scope->var)) world.entity(e.target.name);
                   },
                   [&](const RemoveForce& e) {
                     if (!(rule.scope && e.target.name == rule.scope->var)) world.entity(e.target.name);
                   },
               },
               eff);
  }
  if (rule.kind == RuleKind::Gravity && rule.delta && *rule.delta <= 0) {
    throw Error(ErrorCode::NonPositiveDelta, "gravity step must be positive");
  }
}

}  // namespace

Scenario declare_scenario(Scenario sc) {
  SortHierarchy sorts = sc.hierarchy();
  validate_entities(sc.entities, sorts);
  World world(sc.entities, sorts);
  for (const auto& f : sc.forces) world.entity(f.target);
  if (sc.trace.has_value() == sc.rules.has_value()) {
    throw Error(ErrorCode::InvalidArgument,
                "scenario '" + sc.name + "' needs exactly one of a trace or a rule set");
  }
  if (sc.rules.has_value() != sc.horizon.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "scenario '" + sc.name + "' has rules without a horizon");
  }
  if (sc.trace) {
    validate_trace(*sc.trace, sc.entities);
    if (sc.trace->states.front() != initial_state(sc.entities, sc.forces)) {
      throw Error(ErrorCode::InvalidTrace, "state 0 differs from the declared initial values");
    }
  } else {
    if (*sc.horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
    for (const auto& rule : *sc.rules) check_rule(world, rule);
  }
  return sc;
}

namespace {

void shift_position(ShapeKind kind, const std::string& param, Rational& value, const Rational& dx,
                    const Rational& dy) {
  switch (kind) {
    case ShapeKind::Point:
    case ShapeKind::Circle:
    case ShapeKind::Rectangle:
      if (param == "x") value += dx;
      if (param == "y") value += dy;
      break;
    case ShapeKind::Segment:
      if (param == "x1" || param == "x2") value += dx;
      if (param == "y1" || param == "y2") value += dy;
      break;
    case ShapeKind::Floor:
      if (param == "y") value += dy;
      break;
  }
}

}  // namespace

Scenario translate(const Scenario& sc, const Rational& dx, const Rational& dy) {
  Scenario out = sc;
  for (auto& e : out.entities) {
    for (auto& p : e.params) shift_position(e.shape, p.name, p.value, dx, dy);
  }
  if (out.trace) {
    for (auto& s : out.trace->states) {
      for (auto& [key, value] : s.values) {
        shift_position(find_entity(out.entities, key.first).shape, key.second, value, dx, dy);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule constructors
// ---------------------------------------------------------------------------

Rule gravity_rule(std::optional<Rational> delta) {
  if (delta && *delta <= 0) throw Error(ErrorCode::NonPositiveDelta, "gravity step must be positive");
  Rule r;
  r.name = "gravity";
  r.kind = RuleKind::Gravity;
  r.delta = delta;
  r.scope = RuleScope{"x", std::string(sorts::kEntity), {std::string(sorts::kFloor)}};
  r.condition = fml::not_(fml::exists("y", std::string(sorts::kEntity), fml::atom("on", {"x", "y"})));
  // The amount is filled in from the step size when the rule fires.
  r.effects.push_back(DeltaParam{Term{"x", {}}, "y", num::constant(-1), true});
  return r;
}

Rule umph_rule(const std::string& label, const std::string& target, Formula until) {
  Rule r;
  r.name = "umph_" + label;
  r.kind = RuleKind::Umph;
  r.force_label = label;
  r.force_target = target;
  r.condition = std::move(until);
  r.effects.push_back(RemoveForce{label, Term{target, {}}});
  return r;
}

// ---------------------------------------------------------------------------
// Stratification
// ---------------------------------------------------------------------------

namespace {

const std::string kForces = "#forces";

// Resources a formula reads, tagged with whether any read is negative.
struct Reads {
  std::map<std::string, bool> negative;  // resource -> read under negation

  void add(const std::string& resource, bool neg) {
    auto [it, inserted] = negative.emplace(resource, neg);
    if (!inserted) it->second = it->second || neg;
  }
};

void collect_num(const NumExpr& e, bool neg, Reads& out) {
  std::visit(overloaded{
                 [&](const NumParamRef& p) { out.add(p.param, neg); },
                 [&](const NumBinary& b) {
                   collect_num(b.lhs, neg, out);
                   collect_num(b.rhs, neg, out);
                 },
                 [&](const NumNeg& n) { collect_num(n.operand, neg, out); },
                 [&](const NumPow& p) { collect_num(p.base, neg, out); },
                 [&](const NumNext& n) { collect_num(n.operand, neg, out); },
                 [&](const NumDelta&) {
                   for (const char* p : {"x", "y", "r", "w", "h", "x1", "y1", "x2", "y2"}) out.add(p, neg);
                 },
                 [&](const NumTheta&) {
                   out.add("x", neg);
                   out.add("y", neg);
                 },
                 [&](const NumMeasure&) {
                   for (const char* p : {"r", "w", "h", "x1", "y1", "x2", "y2"}) out.add(p, neg);
                 },
                 [&](const auto&) {},
             },
             e->node);
}

void collect(const Formula& f, bool neg, const Environment* env, Reads& out,
             std::set<std::string>& expanding) {
  std::visit(
      overloaded{
          [&](const FAtom& a) {
            for (const auto& e : a.numeric) collect_num(e, neg, out);
            const RelationDef* def = env ? env->relation(a.relation) : nullptr;
            if (def && def->defined()) {
              if (expanding.insert(a.relation).second) {
                collect(*def->body, neg, env, out, expanding);
                expanding.erase(a.relation);
              }
              return;
            }
            if (a.relation == "forced") {
              out.add(kForces, neg);
              return;
            }
            for (const char* p : {"x", "y", "r", "w", "h", "x1", "y1", "x2", "y2"}) out.add(p, neg);
          },
          [&](const FCompare& c) {
            collect_num(c.lhs, neg, out);
            collect_num(c.rhs, neg, out);
          },
          [&](const FUnary& u) { collect(u.operand, u.op == UnaryOp::Not ? !neg : neg, env, out, expanding); },
          [&](const FBinary& b) {
            collect(b.lhs, b.op == BinaryOp::Implies ? !neg : neg, env, out, expanding);
            collect(b.rhs, neg, env, out, expanding);
          },
          [&](const FQuant& q) { collect(q.body, neg, env, out, expanding); },
          [&](const auto&) {},
      },
      f->node);
}

Reads rule_reads(const Rule& rule, const Environment* env) {
  Reads out;
  std::set<std::string> expanding;
  collect(rule.condition, false, env, out, expanding);
  // The rule fires only while `until` fails: a negative read.
  if (rule.until) collect(*rule.until, true, env, out, expanding);
  return out;
}

std::set<std::string> rule_writes(const Rule& rule) {
  std::set<std::string> out;
  for (const auto& eff : rule.effects) {
    std::visit(overloaded{
                   [&](const SetParam& e) { out.insert(e.param); },
                   [&](const DeltaParam& e) {
                     out.insert(e.param);
                     // Gravity moves both endpoints of a segment.
                     if (e.clamp_to_support) out.insert({"y1", "y2"});
                   },
                   [&](const AddForce&) { out.insert(kForces); },
                   [&](const RemoveForce&) { out.insert(kForces); },
               },
               eff);
  }
  return out;
}

bool contains_temporal(const Formula& f, const Environment* env, std::set<std::string>& expanding) {
  if (is_temporal(f)) return true;
  bool found = false;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    std::visit(overloaded{
                   [&](const FAtom& a) {
                     const RelationDef* def = env ? env->relation(a.relation) : nullptr;
                     if (def && def->defined() && expanding.insert(a.relation).second) {
                       found = found || contains_temporal(*def->body, env, expanding);
                       expanding.erase(a.relation);
                     }
                   },
                   [&](const FUnary& u) { walk(u.operand); },
                   [&](const FBinary& b) {
                     walk(b.lhs);
                     walk(b.rhs);
                   },
                   [&](const FQuant& q) { walk(q.body); },
                   [&](const auto&) {},
               },
               g->node);
  };
  walk(f);
  return found;
}

}  // namespace

std::vector<std::vector<std::size_t>> stratify(const std::vector<Rule>& rules, const Environment* env) {
  const std::size_t n = rules.size();
  std::vector<Reads> reads;
  std::vector<std::set<std::string>> writes;
  for (const auto& r : rules) {
    std::set<std::string> expanding;
    if (contains_temporal(r.condition, env, expanding) ||
        (r.until && contains_temporal(*r.until, env, expanding))) {
      throw Error(ErrorCode::InvalidArgument,
                  "rule '" + r.name + "' refers to other instants; conditions must be state-local");
    }
    reads.push_back(rule_reads(r, env));
    writes.push_back(rule_writes(r));
  }
  // edge[i][j]: 0 none, 1 positive, 2 negative (i writes what j reads)
  std::vector<std::vector<int>> edge(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& res : writes[i]) {
        auto it = reads[j].negative.find(res);
        if (it == reads[j].negative.end()) continue;
        edge[i][j] = std::max(edge[i][j], it->second ? 2 : 1);
      }
    }
  }
  // Reachability closure; n is small.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = i == j || edge[i][j] != 0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  // Components, named by their smallest member.
  std::vector<std::size_t> comp(n);
  for (std::size_t i = 0; i < n; ++i) {
    comp[i] = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (reach[i][j] && reach[j][i]) {
        comp[i] = comp[j];
        break;
      }
    }
  }
  // A rule reading its own writes negatively is fine: all conditions of a
  // stratum are evaluated before any of its effects apply. A negative edge
  // between two distinct rules on a common cycle is not.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && edge[i][j] == 2 && comp[i] == comp[j]) {
        throw Error(ErrorCode::UnstratifiableRuleSet, "rules '" + rules[i].name + "' and '" +
                                                          rules[j].name +
                                                          "' depend on each other through negation");
      }
    }
  }
  // Topological order of components, ties by smallest rule index.
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] == i) roots.push_back(i);
  }
  std::vector<std::vector<std::size_t>> strata;
  std::vector<bool> placed(n, false);
  while (strata.size() < roots.size()) {
    for (std::size_t c : roots) {
      if (placed[c]) continue;
      bool ready = true;
      for (std::size_t d : roots) {
        if (d != c && !placed[d] && reach[d][c]) ready = false;
      }
      if (!ready) continue;
      placed[c] = true;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] == c) members.push_back(i);
      }
      strata.push_back(std::move(members));
      break;
    }
  }
  return strata;
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

namespace {

struct Write {
  std::optional<Rational> set;
  Rational delta{0};
  bool has_delta = false;
};

struct StepState {
  const World& world;
  const State& start;
  const SimConfig& cfg;
  const Environment& env;
  State work;
  std::map<ParamKey, Write> writes;
  std::map<std::pair<std::string, std::string>, std::optional<ForceFluent>> force_edits;

  void set(const ParamKey& key, const Rational& value) {
    Write& w = writes[key];
    if (w.has_delta || (w.set && *w.set != value)) {
      throw Error(ErrorCode::ConflictingEffects, "conflicting writes to " + key.first + "." + key.second);
    }
    w.set = value;
  }

  void add(const ParamKey& key, const Rational& amount) {
    Write& w = writes[key];
    if (w.set) {
      throw Error(ErrorCode::ConflictingEffects, "conflicting writes to " + key.first + "." + key.second);
    }
    w.has_delta = true;
    w.delta += amount;
  }

  void edit_force(const std::string& label, const std::string& target, std::optional<ForceFluent> f) {
    auto key = std::make_pair(label, target);
    auto it = force_edits.find(key);
    if (it != force_edits.end() && it->second != f) {
      throw Error(ErrorCode::ConflictingEffects, "conflicting edits of force " + label + " on " + target);
    }
    force_edits[key] = std::move(f);
  }

  // Makes everything written so far visible to later strata.
  void publish() {
    for (const auto& [key, w] : writes) {
      work.values[key] = w.set ? *w.set : start.at(key.first, key.second) + w.delta;
    }
    work.forces = start.forces;
    for (const auto& [key, f] : force_edits) {
      ForceFluent probe{key.first, key.second, 0, 0, ForceMode::Active};
      work.forces.erase(probe);
      if (f) work.forces.insert(*f);
    }
  }
};

Number eval_effect_expr(const NumExpr& e, StepState& st, const Trace& now, const Bindings& b) {
  NumContext nc{st.world, now.states, 0,
                [&](const Term& t) -> std::string {
                  if (auto it = b.terms.find(t.name); it != b.terms.end()) return it->second;
                  if (st.world.has_entity(t.name)) return t.name;
                  throw Error(ErrorCode::UnboundSymbol, "unbound symbol '" + t.name + "'");
                },
                [&](const std::string& name) -> Number {
                  if (auto v = st.env.param(name)) return Number(*v);
                  throw Error(ErrorCode::UnboundSymbol, "unbound numeric symbol '" + name + "'");
                }};
  Number v = eval_num(e, nc);
  if (!v.exact()) {
    throw Error(ErrorCode::InvalidArgument, "effect value " + v.to_string() + " is not an exact rational");
  }
  return v;
}

std::string target_id(const Term& t, const Bindings& b, const World& world) {
  if (auto it = b.terms.find(t.name); it != b.terms.end()) return it->second;
  world.entity(t.name);
  return t.name;
}

void require_param(const World& world, const std::string& id, const std::string& param) {
  if (!world.entity(id).find(param)) {
    throw Error(ErrorCode::UnknownParameter, "entity '" + id + "' has no parameter '" + param + "'");
  }
}

void gravity_effect(const Rule& rule, const std::string& id, StepState& st) {
  const EntityDecl& e = st.world.entity(id);
  if (e.shape == ShapeKind::Floor) return;  // a floor never falls
  Rational step = rule.delta ? *rule.delta : st.cfg.delta;
  if (step <= 0) throw Error(ErrorCode::NonPositiveDelta, "gravity step must be positive");
  Shape s = shape_at(st.world, st.work, id);
  if (auto support = support_height(st.world, st.work, id)) {
    Rational gap = bottom(s) - *support;
    if (gap < step) step = gap;
  }
  if (step == 0) return;
  if (e.shape == ShapeKind::Segment) {
    st.add({id, "y1"}, -step);
    st.add({id, "y2"}, -step);
  } else {
    st.add({id, "y"}, -step);
  }
}

void apply_effect(const Rule& rule, const Effect& eff, const Bindings& b, StepState& st,
                  const Trace& now) {
  std::visit(overloaded{
                 [&](const SetParam& e) {
                   std::string id = target_id(e.target, b, st.world);
                   require_param(st.world, id, e.param);
                   st.set({id, e.param}, eval_effect_expr(e.value, st, now, b).rational());
                 },
                 [&](const DeltaParam& e) {
                   std::string id = target_id(e.target, b, st.world);
                   if (e.clamp_to_support) {
                     gravity_effect(rule, id, st);
                     return;
                   }
                   require_param(st.world, id, e.param);
                   st.add({id, e.param}, eval_effect_expr(e.amount, st, now, b).rational());
                 },
                 [&](const AddForce& e) {
                   std::string id = target_id(e.target, b, st.world);
                   st.edit_force(e.label, id, ForceFluent{e.label, id, e.dx, e.dy, e.mode});
                 },
                 [&](const RemoveForce& e) {
                   std::string id = target_id(e.target, b, st.world);
                   st.edit_force(e.label, id, std::nullopt);
                 },
             },
             eff);
}

bool excluded(const World& world, const std::string& id, const RuleScope& scope) {
  const std::string& sort = world.entity(id).sort;
  return std::any_of(scope.except.begin(), scope.except.end(),
                     [&](const std::string& s) { return world.sorts().subsort_of(sort, s); });
}

}  // namespace

State step(const World& world, const State& s, const std::vector<Rule>& rules, const SimConfig& cfg) {
  static const Environment kEmpty;
  const Environment& env = cfg.env ? *cfg.env : kEmpty;
  StepState st{world, s, cfg, env, s, {}, {}};
  for (const auto& stratum : stratify(rules, cfg.env)) {
    Trace now{{st.work}};
    EvalContext ctx{world, now, env, cfg.tol};
    // Decide every firing of the stratum before applying any of them.
    std::vector<std::pair<std::size_t, Bindings>> firing;
    for (std::size_t idx : stratum) {
      const Rule& rule = rules[idx];
      std::vector<Bindings> instances;
      if (rule.scope) {
        for (const auto& id : world.domain(rule.scope->sort)) {
          if (excluded(world, id, *rule.scope)) continue;
          Bindings b;
          b.terms[rule.scope->var] = id;
          instances.push_back(std::move(b));
        }
      } else {
        instances.emplace_back();
      }
      for (auto& b : instances) {
        bool fires = eval_formula(rule.condition, ctx, 0, b);
        if (fires && rule.until) fires = !eval_formula(*rule.until, ctx, 0, b);
        if (fires) firing.emplace_back(idx, std::move(b));
      }
    }
    for (const auto& [idx, b] : firing) {
      for (const auto& eff : rules[idx].effects) apply_effect(rules[idx], eff, b, st, now);
    }
    st.publish();
  }
  // Forces left standing after this step's edits displace their targets.
  st.publish();
  for (const auto& f : st.work.forces) {
    const EntityDecl& e = world.entity(f.target);
    for (const auto& p : shape_params(e.shape)) {
      Rational zero(0);
      shift_position(e.shape, p, zero, f.dx, f.dy);
      if (zero != 0) st.add({f.target, p}, zero);
    }
  }
  st.publish();
  State next = st.work;
  next.time = s.time + 1;
  return next;
}

Trace simulate(const Scenario& sc, const SimConfig& cfg, std::optional<std::size_t> steps) {
  if (!sc.rules) throw Error(ErrorCode::InvalidArgument, "scenario '" + sc.name + "' has no rules");
  std::size_t length = steps ? *steps : sc.horizon.value_or(1);
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "a trace needs at least one state");
  World world = sc.world();
  stratify(*sc.rules, cfg.env);
  Trace trace;
  trace.states.push_back(initial_state(sc.entities, sc.forces));
  while (trace.states.size() < length) {
    trace.states.push_back(step(world, trace.states.back(), *sc.rules, cfg));
  }
  return trace;
}

}  // namespace ischema
