#include "ischema/ast.hpp"

#include <sstream>

namespace ischema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

NumExpr make_num(decltype(NumNode::node) node, SourceSpan span) {
  return std::make_shared<const NumNode>(NumNode{std::move(node), std::move(span)});
}

Formula make_formula(decltype(FormulaNode::node) node, SourceSpan span) {
  return std::make_shared<const FormulaNode>(FormulaNode{std::move(node), std::move(span)});
}

}  // namespace

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

namespace num {
NumExpr constant(Rational value, SourceSpan span) {
  value.canonicalize();
  return make_num(NumConst{std::move(value)}, std::move(span));
}
NumExpr param(std::string entity, std::string param, SourceSpan span) {
  return make_num(NumParamRef{Term{std::move(entity), span}, std::move(param)}, span);
}
NumExpr symbol(std::string name, SourceSpan span) {
  return make_num(NumSymbol{std::move(name)}, std::move(span));
}
NumExpr binary(ArithOp op, NumExpr lhs, NumExpr rhs, SourceSpan span) {
  return make_num(NumBinary{op, std::move(lhs), std::move(rhs)}, std::move(span));
}
NumExpr neg(NumExpr operand, SourceSpan span) {
  if (const auto* c = std::get_if<NumConst>(&operand->node)) {
    return constant(-c->value, std::move(span));
  }
  return make_num(NumNeg{std::move(operand)}, std::move(span));
}
NumExpr pow(NumExpr base, unsigned exponent, SourceSpan span) {
  return make_num(NumPow{std::move(base), exponent}, std::move(span));
}
NumExpr delta(std::string a, std::string b, SourceSpan span) {
  return make_num(NumDelta{Term{std::move(a), span}, Term{std::move(b), span}}, span);
}
NumExpr theta(std::string a, std::string b, SourceSpan span) {
  return make_num(NumTheta{Term{std::move(a), span}, Term{std::move(b), span}}, span);
}
NumExpr measure(std::string a, SourceSpan span) {
  return make_num(NumMeasure{Term{std::move(a), span}}, span);
}
NumExpr next(NumExpr operand, SourceSpan span) {
  return make_num(NumNext{std::move(operand)}, std::move(span));
}
}  // namespace num

bool equal(const NumExpr& a, const NumExpr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const NumConst& x) { return x.value == std::get<NumConst>(b->node).value; },
          [&](const NumParamRef& x) {
            const auto& y = std::get<NumParamRef>(b->node);
            return x.entity == y.entity && x.param == y.param;
          },
          [&](const NumSymbol& x) { return x.name == std::get<NumSymbol>(b->node).name; },
          [&](const NumBinary& x) {
            const auto& y = std::get<NumBinary>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const NumNeg& x) { return equal(x.operand, std::get<NumNeg>(b->node).operand); },
          [&](const NumPow& x) {
            const auto& y = std::get<NumPow>(b->node);
            return x.exponent == y.exponent && equal(x.base, y.base);
          },
          [&](const NumDelta& x) {
            const auto& y = std::get<NumDelta>(b->node);
            return x.a == y.a && x.b == y.b;
          },
          [&](const NumTheta& x) {
            const auto& y = std::get<NumTheta>(b->node);
            return x.a == y.a && x.b == y.b;
          },
          [&](const NumMeasure& x) { return x.a == std::get<NumMeasure>(b->node).a; },
          [&](const NumNext& x) { return equal(x.operand, std::get<NumNext>(b->node).operand); },
      },
      a->node);
}

bool uses_next(const NumExpr& e) {
  return std::visit(overloaded{
                        [](const NumBinary& x) { return uses_next(x.lhs) || uses_next(x.rhs); },
                        [](const NumNeg& x) { return uses_next(x.operand); },
                        [](const NumPow& x) { return uses_next(x.base); },
                        [](const NumNext&) { return true; },
                        [](const auto&) { return false; },
                    },
                    e->node);
}

namespace fml {
Formula atom(std::string relation, std::vector<std::string> args, std::vector<NumExpr> numeric,
             SourceSpan span) {
  std::vector<Term> terms;
  terms.reserve(args.size());
  for (auto& a : args) terms.push_back(Term{std::move(a), span});
  return atom(std::move(relation), std::move(terms), std::move(numeric), std::move(span));
}
Formula atom(std::string relation, std::vector<Term> args, std::vector<NumExpr> numeric,
             SourceSpan span) {
  return make_formula(FAtom{std::move(relation), std::move(args), std::move(numeric)},
                      std::move(span));
}
Formula compare(NumExpr lhs, CmpOp op, NumExpr rhs, SourceSpan span) {
  return make_formula(FCompare{std::move(lhs), op, std::move(rhs)}, std::move(span));
}
Formula truth(bool value, SourceSpan span) { return make_formula(FConst{value}, std::move(span)); }
Formula final_(SourceSpan span) { return make_formula(FFinal{}, std::move(span)); }
Formula unary(UnaryOp op, Formula operand, SourceSpan span) {
  return make_formula(FUnary{op, std::move(operand)}, std::move(span));
}
Formula binary(BinaryOp op, Formula lhs, Formula rhs, SourceSpan span) {
  return make_formula(FBinary{op, std::move(lhs), std::move(rhs)}, std::move(span));
}
Formula quant(Quantifier q, std::string var, std::string sort, Formula body, SourceSpan span) {
  return make_formula(FQuant{q, std::move(var), std::move(sort), std::move(body)}, std::move(span));
}
}  // namespace fml

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const FAtom& x) {
            const auto& y = std::get<FAtom>(b->node);
            if (x.relation != y.relation || x.args != y.args || x.numeric.size() != y.numeric.size()) {
              return false;
            }
            for (std::size_t i = 0; i < x.numeric.size(); ++i) {
              if (!equal(x.numeric[i], y.numeric[i])) return false;
            }
            return true;
          },
          [&](const FCompare& x) {
            const auto& y = std::get<FCompare>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const FConst& x) { return x.value == std::get<FConst>(b->node).value; },
          [&](const FFinal&) { return true; },
          [&](const FUnary& x) {
            const auto& y = std::get<FUnary>(b->node);
            return x.op == y.op && equal(x.operand, y.operand);
          },
          [&](const FBinary& x) {
            const auto& y = std::get<FBinary>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const FQuant& x) {
            const auto& y = std::get<FQuant>(b->node);
            return x.q == y.q && x.var == y.var && x.sort == y.sort && equal(x.body, y.body);
          },
      },
      a->node);
}

bool is_temporal(const Formula& f) {
  return std::visit(
      overloaded{
          [](const FAtom& x) {
            for (const auto& n : x.numeric) {
              if (uses_next(n)) return true;
            }
            return false;
          },
          [](const FCompare& x) { return uses_next(x.lhs) || uses_next(x.rhs); },
          [](const FConst&) { return false; },
          [](const FFinal&) { return true; },
          [](const FUnary& x) { return x.op != UnaryOp::Not || is_temporal(x.operand); },
          [](const FBinary& x) {
            return x.op == BinaryOp::Until || is_temporal(x.lhs) || is_temporal(x.rhs);
          },
          [](const FQuant& x) { return is_temporal(x.body); },
      },
      f->node);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string rename(const Term& t, const Renaming* r) {
  if (r) {
    if (auto it = r->find(t.name); it != r->end()) return it->second;
  }
  return t.name;
}

// Numeric precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 primary.
int num_level(const NumExpr& e) {
  return std::visit(overloaded{
                        [](const NumConst& c) { return sgn(c.value) < 0 ? 3 : 5; },
                        [](const NumBinary& b) { return b.op == ArithOp::Mul ? 2 : 1; },
                        [](const NumNeg&) { return 3; },
                        [](const NumPow&) { return 4; },
                        [](const auto&) { return 5; },
                    },
                    e->node);
}

std::string print_num(const NumExpr& e, int min_level, const Renaming* r) {
  std::string out = std::visit(
      overloaded{
          [](const NumConst& c) { return format_rational(c.value); },
          [&](const NumParamRef& p) { return rename(p.entity, r) + "." + p.param; },
          [](const NumSymbol& s) { return s.name; },
          [&](const NumBinary& b) {
            int level = b.op == ArithOp::Mul ? 2 : 1;
            const char* op = b.op == ArithOp::Add ? " + " : b.op == ArithOp::Sub ? " - " : " * ";
            return print_num(b.lhs, level, r) + op + print_num(b.rhs, level + 1, r);
          },
          [&](const NumNeg& n) { return "-" + print_num(n.operand, 4, r); },
          [&](const NumPow& p) {
            return print_num(p.base, 5, r) + "^" + std::to_string(p.exponent);
          },
          [&](const NumDelta& d) { return "delta(" + rename(d.a, r) + "," + rename(d.b, r) + ")"; },
          [&](const NumTheta& d) { return "theta(" + rename(d.a, r) + "," + rename(d.b, r) + ")"; },
          [&](const NumMeasure& m) { return "measure(" + rename(m.a, r) + ")"; },
          [&](const NumNext& n) { return "next(" + print_num(n.operand, 1, r) + ")"; },
      },
      e->node);
  return num_level(e) < min_level ? "(" + out + ")" : out;
}

// Formula precedence: 0 quantifier, 1 implication, 2 or, 3 and, 4 until,
// 5 prefix operators, 6 atoms.
int formula_level(const Formula& f) {
  return std::visit(overloaded{
                        [](const FQuant&) { return 0; },
                        [](const FBinary& b) {
                          switch (b.op) {
                            case BinaryOp::Implies: return 1;
                            case BinaryOp::Or: return 2;
                            case BinaryOp::And: return 3;
                            case BinaryOp::Until: return 4;
                          }
                          return 1;
                        },
                        [](const FUnary&) { return 5; },
                        [](const auto&) { return 6; },
                    },
                    f->node);
}

std::string print_formula(const Formula& f, int min_level, const Renaming* r) {
  std::string out = std::visit(
      overloaded{
          [&](const FAtom& a) {
            std::string s = a.relation + "(";
            for (std::size_t i = 0; i < a.args.size(); ++i) {
              if (i) s += ",";
              s += rename(a.args[i], r);
            }
            for (std::size_t i = 0; i < a.numeric.size(); ++i) {
              s += i == 0 ? ";" : ",";
              s += print_num(a.numeric[i], 1, r);
            }
            return s + ")";
          },
          [&](const FCompare& c) {
            return print_num(c.lhs, 1, r) + " " + std::string(to_string(c.op)) + " " +
                   print_num(c.rhs, 1, r);
          },
          [](const FConst& c) { return std::string(c.value ? "true" : "false"); },
          [](const FFinal&) { return std::string("final"); },
          [&](const FUnary& u) {
            const char* kw = "";
            switch (u.op) {
              case UnaryOp::Not: kw = "not "; break;
              case UnaryOp::Next: kw = "next "; break;
              case UnaryOp::Always: kw = "always "; break;
              case UnaryOp::Eventually: kw = "eventually "; break;
              case UnaryOp::Before: kw = "before "; break;
            }
            return kw + print_formula(u.operand, 5, r);
          },
          [&](const FBinary& b) {
            switch (b.op) {
              case BinaryOp::Implies:
                return print_formula(b.lhs, 2, r) + " -> " + print_formula(b.rhs, 1, r);
              case BinaryOp::Or:
                return print_formula(b.lhs, 2, r) + " or " + print_formula(b.rhs, 3, r);
              case BinaryOp::And:
                return print_formula(b.lhs, 3, r) + " and " + print_formula(b.rhs, 4, r);
              case BinaryOp::Until:
                return print_formula(b.lhs, 5, r) + " until " + print_formula(b.rhs, 4, r);
            }
            return std::string();
          },
          [&](const FQuant& q) {
            // The bound variable shadows any renaming of the same name.
            Renaming inner = r ? *r : Renaming{};
            inner.erase(q.var);
            return std::string(q.q == Quantifier::Forall ? "forall " : "exists ") + q.var + ":" +
                   q.sort + " . " + print_formula(q.body, 0, &inner);
          },
      },
      f->node);
  return formula_level(f) < min_level ? "(" + out + ")" : out;
}

}  // namespace

std::string to_text(const NumExpr& e, const Renaming* rename) { return print_num(e, 1, rename); }

std::string to_text(const Formula& f, const Renaming* rename) {
  return print_formula(f, 0, rename);
}

}  // namespace ischema
