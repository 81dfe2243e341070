#include <sstream>

#include "ischema/dsl.hpp"

namespace ischema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string rational_list(const std::vector<Rational>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_rational(values[i]);
  }
  return out;
}

std::string force_text(const ForceFluent& f) {
  return f.label + " on " + f.target + " = (" + format_rational(f.dx) + ", " + format_rational(f.dy) +
         ") " + std::string(to_string(f.mode));
}

std::string effect_text(const Effect& eff) {
  return std::visit(overloaded{
                        [](const SetParam& e) {
                          return e.target.name + "." + e.param + " := " + to_text(e.value);
                        },
                        [](const DeltaParam& e) {
                          return e.target.name + "." + e.param + " += " + to_text(e.amount);
                        },
                        [](const AddForce& e) {
                          return "add force " + e.label + " on " + e.target.name + " = (" +
                                 format_rational(e.dx) + ", " + format_rational(e.dy) + ") " +
                                 std::string(to_string(e.mode));
                        },
                        [](const RemoveForce& e) {
                          return "remove force " + e.label + " on " + e.target.name;
                        },
                    },
                    eff);
}

std::string rule_text(const Rule& r) {
  switch (r.kind) {
    case RuleKind::Gravity:
      return r.delta ? "gravity " + format_rational(*r.delta) : "gravity";
    case RuleKind::Umph:
      return "umph " + r.force_label + " on " + r.force_target + " until " + to_text(r.condition);
    case RuleKind::Custom:
      break;
  }
  std::string out = "rule " + r.name;
  if (r.scope) {
    out += " forall " + r.scope->var + " : " + r.scope->sort;
    for (std::size_t i = 0; i < r.scope->except.size(); ++i) {
      out += (i ? ", " : " except ") + r.scope->except[i];
    }
  }
  if (r.until) out += " until " + to_text(*r.until);
  out += " when " + to_text(r.condition) + " do ";
  for (std::size_t i = 0; i < r.effects.size(); ++i) {
    if (i) out += ", ";
    out += effect_text(r.effects[i]);
  }
  return out;
}

}  // namespace

std::string print_theory(const Theory& th) {
  std::ostringstream out;
  out << "theory " << th.name << "\n";
  for (const auto& s : th.sorts) out << "  sort " << s.name << " < " << s.parent.value_or("Entity") << "\n";
  for (const auto& r : th.roles) out << "  role " << r.role << " : " << r.sort << "\n";
  for (const auto& rel : th.relations) {
    out << "  relation " << rel.name << "(";
    for (std::size_t i = 0; i < rel.args.size(); ++i) {
      if (i) out << ", ";
      if (!rel.args[i].var.empty()) out << rel.args[i].var << ": ";
      out << rel.args[i].sort;
    }
    for (std::size_t i = 0; i < rel.numeric_params.size(); ++i) {
      out << (i ? ", " : "; ") << rel.numeric_params[i];
    }
    out << ")";
    if (rel.body) out << " := " << to_text(*rel.body);
    out << "\n";
  }
  for (const auto& [name, value] : th.params) out << "  param " << name << " = " << format_rational(value) << "\n";
  for (const auto& [a, b] : th.aliases) out << "  alias " << a << ", " << b << "\n";
  for (const auto& ax : th.axioms) out << "  axiom " << to_text(ax) << "\n";
  out << "end\n";
  return out.str();
}

std::string print_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "scenario " << sc.name << "\n";
  for (const auto& s : sc.sorts) out << "  sort " << s.name << " < " << s.parent.value_or("Entity") << "\n";
  for (const auto& e : sc.entities) {
    std::vector<Rational> args;
    std::vector<const Param*> attrs;
    for (const auto& p : e.params) {
      if (is_shape_param(e.shape, p.name)) {
        args.push_back(p.value);
      } else {
        attrs.push_back(&p);
      }
    }
    out << "  entity " << e.id << " : " << e.sort << " = " << to_string(e.shape) << "("
        << rational_list(args) << ")";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      out << (i ? ", " : " with ") << attrs[i]->name << " = " << format_rational(attrs[i]->value);
    }
    out << "\n";
  }
  for (const auto& f : sc.forces) out << "  force " << force_text(f) << "\n";
  if (sc.trace) {
    const auto& states = sc.trace->states;
    out << "  trace length " << states.size() << "\n";
    for (std::size_t i = 1; i < states.size(); ++i) {
      const State& prev = states[i - 1];
      const State& cur = states[i];
      std::vector<std::string> lines;
      for (const auto& [key, value] : cur.values) {
        if (prev.values.at(key) != value) {
          lines.push_back(key.first + "." + key.second + " = " + format_rational(value));
        }
      }
      for (const auto& f : prev.forces) {
        if (!cur.forces.contains(f)) lines.push_back("remove " + f.label + " on " + f.target);
      }
      for (const auto& f : cur.forces) {
        auto it = prev.forces.find(f);
        if (it == prev.forces.end() || !(*it == f)) lines.push_back("force " + force_text(f));
      }
      if (lines.empty()) continue;
      out << "  state " << i << " {\n";
      for (const auto& l : lines) out << "    " << l << "\n";
      out << "  }\n";
    }
  }
  if (sc.rules) {
    out << "  rules\n";
    for (const auto& r : *sc.rules) out << "    " << rule_text(r) << "\n";
    out << "  horizon " << sc.horizon.value_or(1) << "\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace ischema
