#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ischema/rational.hpp"

namespace ischema {

struct SourceSpan {
  std::string file;
  std::size_t line = 0;    // 1-based; 0 means "no location"
  std::size_t column = 0;  // 1-based
  std::size_t length = 0;
};

// A role name, bound variable or entity id. Spans never take part in equality.
struct Term {
  std::string name;
  SourceSpan span;

  bool operator==(const Term& other) const { return name == other.name; }
};

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };
enum class ArithOp { Add, Sub, Mul };

std::string_view to_string(CmpOp op);

// ---------------------------------------------------------------------------
// Numeric expressions
// ---------------------------------------------------------------------------

struct NumNode;
using NumExpr = std::shared_ptr<const NumNode>;

struct NumConst {
  Rational value;
};
struct NumParamRef {  // entity.param
  Term entity;
  std::string param;
};
struct NumSymbol {  // theory parameter or numeric argument of a definition
  std::string name;
};
struct NumBinary {
  ArithOp op;
  NumExpr lhs;
  NumExpr rhs;
};
struct NumNeg {
  NumExpr operand;
};
struct NumPow {
  NumExpr base;
  unsigned exponent;
};
struct NumDelta {
  Term a;
  Term b;
};
struct NumTheta {
  Term a;
  Term b;
};
struct NumMeasure {
  Term a;
};
struct NumNext {  // value of the operand at the following instant
  NumExpr operand;
};

struct NumNode {
  std::variant<NumConst, NumParamRef, NumSymbol, NumBinary, NumNeg, NumPow, NumDelta, NumTheta,
               NumMeasure, NumNext>
      node;
  SourceSpan span;
};

namespace num {
NumExpr constant(Rational value, SourceSpan span = {});
NumExpr param(std::string entity, std::string param, SourceSpan span = {});
NumExpr symbol(std::string name, SourceSpan span = {});
NumExpr binary(ArithOp op, NumExpr lhs, NumExpr rhs, SourceSpan span = {});
// Negating a constant folds into a negative constant.
NumExpr neg(NumExpr operand, SourceSpan span = {});
NumExpr pow(NumExpr base, unsigned exponent, SourceSpan span = {});
NumExpr delta(std::string a, std::string b, SourceSpan span = {});
NumExpr theta(std::string a, std::string b, SourceSpan span = {});
NumExpr measure(std::string a, SourceSpan span = {});
NumExpr next(NumExpr operand, SourceSpan span = {});
}  // namespace num

bool equal(const NumExpr& a, const NumExpr& b);
bool uses_next(const NumExpr& e);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

enum class UnaryOp { Not, Next, Always, Eventually, Before };
enum class BinaryOp { And, Or, Implies, Until };
enum class Quantifier { Forall, Exists };

struct FAtom {  // relation(t1, ..., tn ; num1, ..., numk)
  std::string relation;
  std::vector<Term> args;
  std::vector<NumExpr> numeric;
};
struct FCompare {
  NumExpr lhs;
  CmpOp op;
  NumExpr rhs;
};
struct FConst {
  bool value;
};
struct FFinal {};
struct FUnary {
  UnaryOp op;
  Formula operand;
};
struct FBinary {
  BinaryOp op;
  Formula lhs;
  Formula rhs;
};
struct FQuant {
  Quantifier q;
  std::string var;
  std::string sort;
  Formula body;
};

struct FormulaNode {
  std::variant<FAtom, FCompare, FConst, FFinal, FUnary, FBinary, FQuant> node;
  SourceSpan span;
};

namespace fml {
Formula atom(std::string relation, std::vector<std::string> args,
             std::vector<NumExpr> numeric = {}, SourceSpan span = {});
Formula atom(std::string relation, std::vector<Term> args, std::vector<NumExpr> numeric,
             SourceSpan span);
Formula compare(NumExpr lhs, CmpOp op, NumExpr rhs, SourceSpan span = {});
Formula truth(bool value, SourceSpan span = {});
Formula final_(SourceSpan span = {});
Formula unary(UnaryOp op, Formula operand, SourceSpan span = {});
Formula binary(BinaryOp op, Formula lhs, Formula rhs, SourceSpan span = {});
Formula quant(Quantifier q, std::string var, std::string sort, Formula body, SourceSpan span = {});

inline Formula not_(Formula f) { return unary(UnaryOp::Not, std::move(f)); }
inline Formula next(Formula f) { return unary(UnaryOp::Next, std::move(f)); }
inline Formula always(Formula f) { return unary(UnaryOp::Always, std::move(f)); }
inline Formula eventually(Formula f) { return unary(UnaryOp::Eventually, std::move(f)); }
inline Formula before(Formula f) { return unary(UnaryOp::Before, std::move(f)); }
inline Formula and_(Formula a, Formula b) { return binary(BinaryOp::And, std::move(a), std::move(b)); }
inline Formula or_(Formula a, Formula b) { return binary(BinaryOp::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) {
  return binary(BinaryOp::Implies, std::move(a), std::move(b));
}
inline Formula until(Formula a, Formula b) {
  return binary(BinaryOp::Until, std::move(a), std::move(b));
}
inline Formula forall(std::string v, std::string s, Formula body) {
  return quant(Quantifier::Forall, std::move(v), std::move(s), std::move(body));
}
inline Formula exists(std::string v, std::string s, Formula body) {
  return quant(Quantifier::Exists, std::move(v), std::move(s), std::move(body));
}
}  // namespace fml

// Structural equality, ignoring source spans.
bool equal(const Formula& a, const Formula& b);
bool is_temporal(const Formula& f);  // any temporal operator, Final, or next()

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

// Renames applied while printing (e.g. role -> entity for diagnostics).
using Renaming = std::map<std::string, std::string>;

std::string to_text(const NumExpr& e, const Renaming* rename = nullptr);
// Canonical surface syntax; parses back to an equal formula.
std::string to_text(const Formula& f, const Renaming* rename = nullptr);

}  // namespace ischema
