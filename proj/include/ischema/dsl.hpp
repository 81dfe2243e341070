#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ischema/ast.hpp"
#include "ischema/model.hpp"
#include "ischema/scenario.hpp"
#include "ischema/theory.hpp"

namespace ischema {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;  // SyntaxError, ReservedWord, SortMismatch, UnboundSymbol, ...
  std::string message;
  SourceSpan span;
};

// "file:line:col: error[code]: message"
std::string format_diagnostic(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diags);

template <class T>
struct Parsed {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

bool is_reserved_word(std::string_view word);

// Syntax only; run sort_check on the result for typing.
Parsed<Theory> parse_theory(std::string_view text, const std::string& file = "<input>");

// Syntax plus entity validation (duplicates, shapes, extents, state bounds).
Parsed<Scenario> parse_scenario(std::string_view text, const std::string& file = "<input>");

// Empty iff every relation application matches its signature up to
// subsorting, every term and symbol is declared, and every numeric parameter
// reference exists. The prelude contributes relation definitions, sorts and
// parameters.
std::vector<Diagnostic> sort_check(const Theory& theory, const Theory* prelude = nullptr);
std::vector<Diagnostic> sort_check(const Scenario& scenario, const Theory* prelude = nullptr);

// Canonical text; parse_theory/parse_scenario read it back to an equal value.
std::string print_theory(const Theory& theory);
std::string print_scenario(const Scenario& scenario);

// Canonical JSON: sorted keys, rationals as exact decimal or "p/q" strings,
// two-space indentation, trailing newline.
std::string serialize_trace(const Trace& trace, const std::vector<EntityDecl>& entities);

struct TraceDocument {
  std::vector<EntityDecl> entities;
  Trace trace;
};

// Throws InvalidTrace on malformed documents.
TraceDocument parse_trace_json(std::string_view text);

}  // namespace ischema
