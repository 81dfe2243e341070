#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "ischema/dsl.hpp"
#include "ischema/dynamics.hpp"

namespace ischema {

std::string format_diagnostic(const Diagnostic& d) {
  std::string where = d.span.file.empty() ? "<input>" : d.span.file;
  if (d.span.line > 0) where += ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column);
  return where + ": " + (d.severity == Severity::Error ? "error" : "warning") + "[" + d.code +
         "]: " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

constexpr std::array kReserved = {
    "theory", "end",    "sort",    "role",   "relation", "param",   "alias",      "axiom",
    "forall", "exists", "not",     "next",   "always",   "eventually", "before",  "until",
    "and",    "or",     "true",    "false",  "final",    "delta",   "theta",      "measure",
    "scenario", "entity", "force", "trace",  "state",    "rules",   "gravity",    "umph",
    "rule",   "when",   "do",      "horizon", "with",    "except",  "add",        "remove",
    "active", "passive",
};

}  // namespace

bool is_reserved_word(std::string_view word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

struct SyntaxError {
  Diagnostic diag;
};

Diagnostic error_at(const SourceSpan& span, std::string code, std::string message) {
  return Diagnostic{Severity::Error, std::move(code), std::move(message), span};
}

std::vector<Token> lex(std::string_view text, const std::string& file, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto span_here = [&](std::size_t len) { return SourceSpan{file, line, col, len}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), span_here(j - i)});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto digits = [&] {
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      };
      digits();
      if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        digits();
      }
      if (j + 1 < text.size() && text[j] == '/' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        digits();
      }
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), span_here(j - i)});
      advance(j - i);
      continue;
    }
    static const std::array<std::string_view, 6> kTwo = {":=", "+=", "->", "<=", ">=", "!="};
    std::string_view two = text.substr(i, 2);
    if (std::find(kTwo.begin(), kTwo.end(), two) != kTwo.end()) {
      out.push_back({Tok::Punct, std::string(two), span_here(2)});
      advance(2);
      continue;
    }
    if (std::string_view("(),:.;=<>+-*^{}").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), span_here(1)});
      advance(1);
      continue;
    }
    diags.push_back(error_at(span_here(1), "SyntaxError", std::string("unexpected character '") + c + "'"));
    advance(1);
  }
  out.push_back({Tok::End, "", SourceSpan{file, line, col, 0}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, std::string file) : file_(std::move(file)) {
    toks_ = lex(text, file_, diags_);
  }

  std::vector<Diagnostic>& diagnostics() { return diags_; }

  // --- token helpers ------------------------------------------------------

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool at_kw(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  const Token& previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    std::string found = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
    throw SyntaxError{error_at(at.span, "SyntaxError", message + ", found " + found)};
  }

  const Token& expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    return take();
  }
  const Token& expect_kw(std::string_view w) {
    if (!at_kw(w)) fail(peek(), "expected '" + std::string(w) + "'");
    return take();
  }
  const Token& expect_ident(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected " + std::string(what));
    if (is_reserved_word(t.text)) {
      throw SyntaxError{error_at(t.span, "ReservedWord",
                                 "'" + t.text + "' is a reserved word and cannot be used as " +
                                     std::string(what))};
    }
    return take();
  }

  SourceSpan span_from(const SourceSpan& start) const {
    SourceSpan s = start;
    const SourceSpan& last = previous().span;
    if (last.line == start.line && last.column + last.length > start.column) {
      s.length = last.column + last.length - start.column;
    }
    return s;
  }

  Rational signed_rational() {
    const Token& start = peek();
    bool negative = false;
    if (at_punct("-")) {
      take();
      negative = true;
    }
    const Token& t = peek();
    if (t.kind != Tok::Number) fail(t, "expected a number");
    take();
    auto value = parse_rational(t.text);
    if (!value) {
      throw SyntaxError{error_at(t.span, "SyntaxError", "malformed number '" + t.text + "'")};
    }
    (void)start;
    return negative ? Rational(-*value) : *value;
  }

  std::size_t natural(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
      fail(t, "expected " + std::string(what));
    }
    take();
    return std::stoul(t.text);
  }

  Term term() {
    const Token& t = expect_ident("a term");
    return Term{t.text, t.span};
  }

  // --- numeric expressions ------------------------------------------------

  NumExpr num_expr() {
    SourceSpan start = peek().span;
    NumExpr lhs = num_mul();
    while (at_punct("+") || at_punct("-")) {
      ArithOp op = take().text == "+" ? ArithOp::Add : ArithOp::Sub;
      NumExpr rhs = num_mul();
      lhs = num::binary(op, lhs, rhs, span_from(start));
    }
    return lhs;
  }

  NumExpr num_mul() {
    SourceSpan start = peek().span;
    NumExpr lhs = num_unary();
    while (at_punct("*")) {
      take();
      NumExpr rhs = num_unary();
      lhs = num::binary(ArithOp::Mul, lhs, rhs, span_from(start));
    }
    return lhs;
  }

  NumExpr num_unary() {
    SourceSpan start = peek().span;
    if (at_punct("-")) {
      take();
      NumExpr operand = num_unary();
      return num::neg(operand, span_from(start));
    }
    return num_pow();
  }

  NumExpr num_pow() {
    SourceSpan start = peek().span;
    NumExpr base = num_primary();
    if (at_punct("^")) {
      take();
      std::size_t e = natural("a natural exponent");
      return num::pow(base, static_cast<unsigned>(e), span_from(start));
    }
    return base;
  }

  NumExpr num_primary() {
    const Token& t = peek();
    SourceSpan start = t.span;
    if (t.kind == Tok::Number) {
      take();
      auto value = parse_rational(t.text);
      if (!value) throw SyntaxError{error_at(t.span, "SyntaxError", "malformed number '" + t.text + "'")};
      return num::constant(*value, t.span);
    }
    if (at_punct("(")) {
      take();
      NumExpr inner = num_expr();
      expect_punct(")");
      return inner;
    }
    if (at_kw("delta") || at_kw("theta")) {
      bool is_delta = take().text == "delta";
      expect_punct("(");
      Term a = term();
      expect_punct(",");
      Term b = term();
      expect_punct(")");
      auto node = std::make_shared<NumNode>();
      if (is_delta) {
        node->node = NumDelta{a, b};
      } else {
        node->node = NumTheta{a, b};
      }
      node->span = span_from(start);
      return node;
    }
    if (at_kw("measure")) {
      take();
      expect_punct("(");
      Term a = term();
      expect_punct(")");
      auto node = std::make_shared<NumNode>();
      node->node = NumMeasure{a};
      node->span = span_from(start);
      return node;
    }
    if (at_kw("next")) {
      take();
      expect_punct("(");
      NumExpr inner = num_expr();
      expect_punct(")");
      return num::next(inner, span_from(start));
    }
    if (t.kind == Tok::Ident) {
      if (at_punct(".", 1) && peek(2).kind == Tok::Ident) {
        Term entity = term();
        take();
        const Token& p = expect_ident("a parameter name");
        auto node = std::make_shared<NumNode>();
        node->node = NumParamRef{entity, p.text};
        node->span = span_from(start);
        return node;
      }
      const Token& s = expect_ident("a numeric symbol");
      return num::symbol(s.text, s.span);
    }
    fail(t, "expected a numeric expression");
  }

  std::optional<CmpOp> cmp_op() {
    static const std::map<std::string, CmpOp, std::less<>> kOps = {
        {"<", CmpOp::Lt}, {"<=", CmpOp::Le}, {"=", CmpOp::Eq},
        {"!=", CmpOp::Ne}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
    if (peek().kind != Tok::Punct) return std::nullopt;
    auto it = kOps.find(peek().text);
    if (it == kOps.end()) return std::nullopt;
    take();
    return it->second;
  }

  Formula comparison() {
    SourceSpan start = peek().span;
    NumExpr lhs = num_expr();
    auto op = cmp_op();
    if (!op) fail(peek(), "expected a comparison operator");
    NumExpr rhs = num_expr();
    return fml::compare(lhs, *op, rhs, span_from(start));
  }

  // Tries `numExpr CMP numExpr` and rewinds on failure.
  std::optional<Formula> try_comparison() {
    std::size_t saved = pos_;
    try {
      return comparison();
    } catch (const SyntaxError&) {
      pos_ = saved;
      return std::nullopt;
    }
  }

  // --- formulas -----------------------------------------------------------

  Formula formula() {
    if (at_kw("forall") || at_kw("exists")) return quantified();
    return implication();
  }

  Formula quantified() {
    SourceSpan start = peek().span;
    Quantifier q = take().text == "forall" ? Quantifier::Forall : Quantifier::Exists;
    const Token& var = expect_ident("a variable name");
    expect_punct(":");
    const Token& sort = expect_ident("a sort name");
    expect_punct(".");
    Formula body = formula();
    return fml::quant(q, var.text, sort.text, body, span_from(start));
  }

  Formula implication() {
    SourceSpan start = peek().span;
    Formula lhs = disjunction();
    if (at_punct("->")) {
      take();
      Formula rhs = formula();
      return fml::binary(BinaryOp::Implies, lhs, rhs, span_from(start));
    }
    return lhs;
  }

  Formula disjunction() {
    SourceSpan start = peek().span;
    Formula lhs = conjunction();
    while (at_kw("or")) {
      take();
      Formula rhs = conjunction();
      lhs = fml::binary(BinaryOp::Or, lhs, rhs, span_from(start));
    }
    return lhs;
  }

  Formula conjunction() {
    SourceSpan start = peek().span;
    Formula lhs = until_formula();
    while (at_kw("and")) {
      take();
      Formula rhs = until_formula();
      lhs = fml::binary(BinaryOp::And, lhs, rhs, span_from(start));
    }
    return lhs;
  }

  Formula until_formula() {
    SourceSpan start = peek().span;
    Formula lhs = prefixed();
    if (at_kw("until")) {
      take();
      Formula rhs = until_formula();
      return fml::binary(BinaryOp::Until, lhs, rhs, span_from(start));
    }
    return lhs;
  }

  Formula prefixed() {
    static const std::map<std::string, UnaryOp, std::less<>> kOps = {
        {"not", UnaryOp::Not},
        {"next", UnaryOp::Next},
        {"always", UnaryOp::Always},
        {"eventually", UnaryOp::Eventually},
        {"before", UnaryOp::Before}};
    SourceSpan start = peek().span;
    if (at_kw("forall") || at_kw("exists")) return quantified();
    if (peek().kind == Tok::Ident) {
      auto it = kOps.find(peek().text);
      if (it != kOps.end()) {
        // next(e) < ... is a numeric comparison, not the temporal operator.
        if (it->second == UnaryOp::Next && at_punct("(", 1)) {
          if (auto c = try_comparison()) return *c;
        }
        take();
        Formula operand = prefixed();
        return fml::unary(it->second, operand, span_from(start));
      }
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    SourceSpan start = t.span;
    if (at_punct("(")) {
      if (auto c = try_comparison()) return *c;
      take();
      Formula inner = formula();
      expect_punct(")");
      return inner;
    }
    if (at_kw("true") || at_kw("false")) {
      take();
      return fml::truth(t.text == "true", t.span);
    }
    if (at_kw("final")) {
      take();
      return fml::final_(t.span);
    }
    if (t.kind == Tok::Ident && !is_reserved_word(t.text) && at_punct("(", 1)) return atom();
    return comparison();
  }

  Formula atom() {
    SourceSpan start = peek().span;
    const Token& name = expect_ident("a relation name");
    expect_punct("(");
    std::vector<Term> args;
    std::vector<NumExpr> numeric;
    args.push_back(term());
    while (at_punct(",")) {
      take();
      args.push_back(term());
    }
    if (at_punct(";")) {
      take();
      numeric.push_back(num_expr());
      while (at_punct(",")) {
        take();
        numeric.push_back(num_expr());
      }
    }
    expect_punct(")");
    return fml::atom(name.text, std::move(args), std::move(numeric), span_from(start));
  }

  // --- theories -----------------------------------------------------------

  Theory theory() {
    Theory th;
    expect_kw("theory");
    th.name = expect_ident("a theory name").text;
    while (!at_kw("end")) {
      if (at_end()) fail(peek(), "expected 'end'");
      std::size_t before = pos_;
      try {
        theory_item(th);
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        if (pos_ == before) take();
        skip_to({"sort", "role", "relation", "param", "alias", "axiom", "end"});
      }
    }
    take();
    if (!at_end()) fail(peek(), "expected end of input after 'end'");
    return th;
  }

  void skip_to(std::initializer_list<std::string_view> words) {
    while (!at_end()) {
      for (auto w : words) {
        if (at_kw(w)) return;
      }
      take();
    }
  }

  Sort sort_decl() {
    expect_kw("sort");
    Sort s;
    s.name = expect_ident("a sort name").text;
    expect_punct("<");
    s.parent = expect_ident("a sort name").text;
    return s;
  }

  void theory_item(Theory& th) {
    if (at_kw("sort")) {
      th.sorts.push_back(sort_decl());
    } else if (at_kw("role")) {
      take();
      std::vector<Token> names{expect_ident("a role name")};
      while (at_punct(",")) {
        take();
        names.push_back(expect_ident("a role name"));
      }
      expect_punct(":");
      const Token& sort = expect_ident("a sort name");
      for (const auto& n : names) th.roles.push_back(RoleDecl{n.text, sort.text, n.span});
    } else if (at_kw("relation")) {
      th.relations.push_back(relation_decl());
    } else if (at_kw("param")) {
      take();
      const Token& name = expect_ident("a parameter name");
      expect_punct("=");
      th.params.insert_or_assign(name.text, signed_rational());
    } else if (at_kw("alias")) {
      take();
      std::string a = expect_ident("a role name").text;
      expect_punct(",");
      std::string b = expect_ident("a role name").text;
      th.aliases.emplace_back(a, b);
    } else if (at_kw("axiom")) {
      take();
      th.axioms.push_back(formula());
    } else {
      fail(peek(), "expected a theory declaration");
    }
  }

  RelationDef relation_decl() {
    RelationDef def;
    SourceSpan start = expect_kw("relation").span;
    def.name = expect_ident("a relation name").text;
    expect_punct("(");
    bool named = at_punct(":", 1);
    auto arg = [&] {
      RelationArg a;
      if (named) {
        a.var = expect_ident("an argument name").text;
        expect_punct(":");
      }
      a.sort = expect_ident("a sort name").text;
      def.args.push_back(a);
    };
    arg();
    while (at_punct(",")) {
      take();
      arg();
    }
    if (at_punct(";")) {
      if (!named) fail(peek(), "numeric parameters need named arguments");
      take();
      def.numeric_params.push_back(expect_ident("a parameter name").text);
      while (at_punct(",")) {
        take();
        def.numeric_params.push_back(expect_ident("a parameter name").text);
      }
    }
    expect_punct(")");
    def.span = span_from(start);
    if (at_punct(":=")) {
      if (!named) fail(peek(), "a defined relation needs named arguments");
      take();
      def.body = formula();
    }
    return def;
  }

  // --- scenarios ----------------------------------------------------------

  struct EntitySource {
    SourceSpan span;
    SourceSpan sort_span;
  };

  Scenario scenario() {
    Scenario sc;
    expect_kw("scenario");
    const Token& name = expect_ident("a scenario name");
    sc.name = name.text;
    name_span_ = name.span;
    for (;;) {
      std::size_t before = pos_;
      try {
        if (at_kw("sort")) {
          sc.sorts.push_back(sort_decl());
        } else if (at_kw("entity")) {
          entity_decl(sc);
        } else if (at_kw("force")) {
          take();
          ForceFluent f = force_body();
          if (!sc.forces.insert(f).second) {
            diags_.push_back(error_at(previous().span, "DuplicateForce",
                                      "force '" + f.label + "' on '" + f.target + "' declared twice"));
          }
        } else {
          break;
        }
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        if (pos_ == before) take();
        skip_to({"sort", "entity", "force", "trace", "rules", "end"});
      }
    }
    check_entities(sc);
    if (at_kw("trace")) {
      trace_block(sc);
    } else if (at_kw("rules")) {
      rules_block(sc);
    } else {
      fail(peek(), "expected 'trace' or 'rules'");
    }
    expect_kw("end");
    if (!at_end()) fail(peek(), "expected end of input after 'end'");
    return sc;
  }

  void entity_decl(Scenario& sc) {
    SourceSpan start = expect_kw("entity").span;
    const Token& id = expect_ident("an entity id");
    expect_punct(":");
    const Token& sort = expect_ident("a sort name");
    expect_punct("=");
    const Token& shape_tok = expect_ident("a shape");
    auto shape = shape_from_string(shape_tok.text);
    if (!shape) {
      throw SyntaxError{error_at(shape_tok.span, "SyntaxError",
                                 "unknown shape '" + shape_tok.text +
                                     "' (point, circle, rectangle, segment, floor)")};
    }
    expect_punct("(");
    std::vector<Rational> args{signed_rational()};
    while (at_punct(",")) {
      take();
      args.push_back(signed_rational());
    }
    expect_punct(")");
    if (args.size() != shape_params(*shape).size()) {
      throw SyntaxError{error_at(shape_tok.span, "SyntaxError",
                                 shape_tok.text + " takes " + std::to_string(shape_params(*shape).size()) +
                                     " arguments, got " + std::to_string(args.size()))};
    }
    std::vector<Param> attrs;
    if (at_kw("with")) {
      take();
      do {
        if (!attrs.empty()) take();
        const Token& p = expect_ident("an attribute name");
        if (is_shape_param(*shape, p.text) ||
            std::any_of(attrs.begin(), attrs.end(), [&](const Param& q) { return q.name == p.text; })) {
          throw SyntaxError{error_at(p.span, "DuplicateParameter", "parameter '" + p.text + "' given twice")};
        }
        expect_punct("=");
        attrs.push_back(Param{p.text, signed_rational()});
      } while (at_punct(","));
    }
    sc.entities.push_back(make_entity(id.text, sort.text, *shape, args, std::move(attrs)));
    entity_src_.push_back(EntitySource{span_from(start), sort.span});
  }

  void check_entities(const Scenario& sc) {
    SortHierarchy sorts;
    try {
      sorts = build_hierarchy(sc.sorts);
    } catch (const Error& e) {
      diags_.push_back(error_at(name_span_, std::string(to_string(e.code())), e.what()));
      return;
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < sc.entities.size(); ++i) {
      const EntityDecl& e = sc.entities[i];
      const EntitySource& src = entity_src_[i];
      if (!seen.insert(e.id).second) {
        diags_.push_back(error_at(src.span, "DuplicateEntity", "entity '" + e.id + "' declared twice"));
      }
      if (!sorts.contains(e.sort)) {
        diags_.push_back(error_at(src.sort_span, "UnknownSort", "unknown sort '" + e.sort + "'"));
        continue;
      }
      if (!sorts.admits(e.sort, e.shape)) {
        diags_.push_back(error_at(src.span, "BadShapeForSort",
                                  std::string(to_string(e.shape)) + " is not a shape for sort " + e.sort));
      }
      for (const auto& p : e.params) {
        if ((p.name == "r" || p.name == "w" || p.name == "h") && p.value <= 0) {
          diags_.push_back(error_at(src.span, "NegativeExtent",
                                    "extent " + p.name + " of '" + e.id + "' must be positive"));
        }
      }
    }
    for (const auto& f : sc.forces) {
      if (!seen.contains(f.target)) {
        diags_.push_back(error_at(name_span_, "UnknownEntity",
                                  "force '" + f.label + "' targets undeclared entity '" + f.target + "'"));
      }
    }
  }

  ForceMode force_mode() {
    if (at_kw("active")) {
      take();
      return ForceMode::Active;
    }
    if (at_kw("passive")) {
      take();
      return ForceMode::Passive;
    }
    return ForceMode::Active;
  }

  // L on e = (dx, dy) [active|passive]
  ForceFluent force_body() {
    ForceFluent f;
    f.label = expect_ident("a force label").text;
    expect_kw("on");
    f.target = expect_ident("an entity id").text;
    expect_punct("=");
    expect_punct("(");
    f.dx = signed_rational();
    expect_punct(",");
    f.dy = signed_rational();
    expect_punct(")");
    f.mode = force_mode();
    return f;
  }

  void trace_block(Scenario& sc) {
    expect_kw("trace");
    expect_kw("length");
    const Token& len_tok = peek();
    std::size_t length = natural("a trace length");
    if (length < 1) {
      throw SyntaxError{error_at(len_tok.span, "InvalidTrace", "a trace needs at least one state")};
    }
    Trace trace;
    trace.states.push_back(initial_state(sc.entities, sc.forces));
    std::size_t last = 0;
    while (at_kw("state")) {
      SourceSpan state_span = take().span;
      const Token& idx_tok = peek();
      std::size_t idx = natural("a state index");
      state_span = span_from(state_span);
      if (idx >= length) {
        throw SyntaxError{error_at(idx_tok.span, "TimeOutOfRange",
                                   "state " + std::to_string(idx) + " is outside a trace of length " +
                                       std::to_string(length))};
      }
      if (idx == 0) {
        throw SyntaxError{error_at(idx_tok.span, "InvalidTrace",
                                   "state 0 is given by the entity and force declarations")};
      }
      if (idx <= last) {
        throw SyntaxError{error_at(idx_tok.span, "InvalidTrace", "state indices must increase")};
      }
      while (trace.states.size() <= idx) {
        State s = trace.states.back();
        s.time = trace.states.size();
        trace.states.push_back(std::move(s));
      }
      last = idx;
      State& s = trace.states.back();
      expect_punct("{");
      while (!at_punct("}")) {
        if (at_kw("force")) {
          take();
          ForceFluent f = force_body();
          check_entity_ref(sc, f.target, previous().span);
          s.forces.erase(f);
          s.forces.insert(f);
        } else if (at_kw("remove")) {
          take();
          ForceFluent f;
          f.label = expect_ident("a force label").text;
          expect_kw("on");
          const Token& target = expect_ident("an entity id");
          f.target = target.text;
          if (s.forces.erase(f) == 0) {
            diags_.push_back(error_at(target.span, "UnknownForce",
                                      "no force '" + f.label + "' on '" + f.target + "' to remove"));
          }
        } else {
          const Token& e = expect_ident("an entity id");
          expect_punct(".");
          const Token& p = expect_ident("a parameter name");
          expect_punct("=");
          Rational v = signed_rational();
          if (check_entity_ref(sc, e.text, e.span)) {
            if (!s.has(e.text, p.text)) {
              diags_.push_back(error_at(p.span, "UnknownParameter",
                                        "entity '" + e.text + "' has no parameter '" + p.text + "'"));
            } else {
              if ((p.text == "r" || p.text == "w" || p.text == "h") && v <= 0) {
                diags_.push_back(error_at(p.span, "NegativeExtent", "extent must be positive"));
              }
              s.values[{e.text, p.text}] = v;
            }
          }
        }
      }
      expect_punct("}");
    }
    while (trace.states.size() < length) {
      State s = trace.states.back();
      s.time = trace.states.size();
      trace.states.push_back(std::move(s));
    }
    sc.trace = std::move(trace);
  }

  bool check_entity_ref(const Scenario& sc, const std::string& id, const SourceSpan& span) {
    bool known = std::any_of(sc.entities.begin(), sc.entities.end(),
                             [&](const EntityDecl& e) { return e.id == id; });
    if (!known) diags_.push_back(error_at(span, "UnknownEntity", "undeclared entity '" + id + "'"));
    return known;
  }

  void rules_block(Scenario& sc) {
    expect_kw("rules");
    std::vector<Rule> rules;
    while (!at_kw("horizon")) {
      if (at_end()) fail(peek(), "expected 'horizon'");
      std::size_t before = pos_;
      try {
        rules.push_back(rule_item());
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        if (pos_ == before) take();
        skip_to({"gravity", "umph", "rule", "horizon", "end"});
        if (at_kw("end")) fail(peek(), "expected 'horizon'");
      }
    }
    take();
    const Token& h = peek();
    sc.horizon = natural("a horizon");
    if (*sc.horizon < 1) {
      throw SyntaxError{error_at(h.span, "InvalidArgument", "horizon must be at least 1")};
    }
    sc.rules = std::move(rules);
  }

  Rule rule_item() {
    SourceSpan start = peek().span;
    if (at_kw("gravity")) {
      take();
      std::optional<Rational> delta;
      if (peek().kind == Tok::Number || at_punct("-")) {
        const Token& t = peek();
        delta = signed_rational();
        if (*delta <= 0) {
          throw SyntaxError{error_at(t.span, "NonPositiveDelta", "gravity step must be positive")};
        }
      }
      Rule r = gravity_rule(delta);
      r.span = span_from(start);
      return r;
    }
    if (at_kw("umph")) {
      take();
      std::string label = expect_ident("a force label").text;
      expect_kw("on");
      std::string target = expect_ident("an entity id").text;
      expect_kw("until");
      Formula until = formula();
      Rule r = umph_rule(label, target, until);
      r.span = span_from(start);
      return r;
    }
    expect_kw("rule");
    Rule r;
    r.name = expect_ident("a rule name").text;
    if (at_kw("forall")) {
      take();
      RuleScope scope;
      scope.var = expect_ident("a variable name").text;
      expect_punct(":");
      scope.sort = expect_ident("a sort name").text;
      if (at_kw("except")) {
        take();
        scope.except.push_back(expect_ident("a sort name").text);
        while (at_punct(",")) {
          take();
          scope.except.push_back(expect_ident("a sort name").text);
        }
      }
      r.scope = std::move(scope);
    }
    if (at_kw("until")) {
      take();
      r.until = formula();
    }
    expect_kw("when");
    r.condition = formula();
    expect_kw("do");
    r.effects.push_back(effect());
    while (at_punct(",")) {
      take();
      r.effects.push_back(effect());
    }
    r.span = span_from(start);
    return r;
  }

  Effect effect() {
    if (at_kw("add")) {
      take();
      expect_kw("force");
      SourceSpan target_span = peek(2).span;
      ForceFluent f = force_body();
      return AddForce{f.label, Term{f.target, target_span}, f.dx, f.dy, f.mode};
    }
    if (at_kw("remove")) {
      take();
      expect_kw("force");
      std::string label = expect_ident("a force label").text;
      expect_kw("on");
      return RemoveForce{label, term()};
    }
    Term target = term();
    expect_punct(".");
    std::string param = expect_ident("a parameter name").text;
    if (at_punct(":=")) {
      take();
      return SetParam{target, param, num_expr()};
    }
    if (at_punct("+=")) {
      take();
      return DeltaParam{target, param, num_expr(), false};
    }
    fail(peek(), "expected ':=' or '+='");
  }

 private:
  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
  SourceSpan name_span_;
  std::vector<EntitySource> entity_src_;
};

}  // namespace

Parsed<Theory> parse_theory(std::string_view text, const std::string& file) {
  Parser p(text, file);
  Parsed<Theory> out;
  try {
    out.value = p.theory();
  } catch (const SyntaxError& e) {
    p.diagnostics().push_back(e.diag);
  }
  out.diagnostics = std::move(p.diagnostics());
  if (has_errors(out.diagnostics)) out.value.reset();
  return out;
}

Parsed<Scenario> parse_scenario(std::string_view text, const std::string& file) {
  Parser p(text, file);
  Parsed<Scenario> out;
  try {
    out.value = p.scenario();
  } catch (const SyntaxError& e) {
    p.diagnostics().push_back(e.diag);
  }
  out.diagnostics = std::move(p.diagnostics());
  if (has_errors(out.diagnostics)) out.value.reset();
  if (out.value) {
    // Anything the spanned checks above missed.
    try {
      out.value = declare_scenario(std::move(*out.value));
    } catch (const Error& e) {
      out.diagnostics.push_back(
          error_at(SourceSpan{file, 1, 1, 0}, std::string(to_string(e.code())), e.what()));
      out.value.reset();
    }
  }
  return out;
}

}  // namespace ischema
