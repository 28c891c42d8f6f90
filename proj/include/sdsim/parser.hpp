#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdsim/expr.hpp"
#include "sdsim/units.hpp"

namespace sdsim {

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    LineSpan span;
};

// One equation entry as grouped from the source, before expression parsing.
struct SourceEntry {
    std::optional<int> index;
    std::string name;
    std::string raw_expr;
    std::string raw_units;
    std::optional<std::string> raw_range;
    std::optional<std::string> comment;
    LineSpan span;
};

struct ParseResult {
    std::optional<ModelSpec> spec;  // absent iff any Error was diagnosed
    std::vector<Diagnostic> diagnostics;
    std::vector<SourceEntry> entries;

    bool ok() const { return spec.has_value(); }
    bool has_errors() const;
};

// Model source grammar. An entry is
//
//   (NN) Name= expr            the (NN) tag is optional and ignored
//   Units: unit-expr [range]   range like [0,?] is optional
//   free doc lines             until a blank line or the next entry
//
// where the expression may continue over several lines up to the Units line.
// Unquoted names use letters, digits, spaces, and periods; names with
// & , ( ) / or a leading digit are double-quoted. Functions: INTEG, MAX,
// MIN, RANDOM NORMAL. Control entries (INITIAL TIME, FINAL TIME, TIME STEP,
// SAVEPER) populate SimControl; SAVEPER may reference TIME STEP.
ParseResult parse_model(const std::string& source);

// unit-expr := term (('*'|'/') term)*, term := name | '1' | '(' unit-expr ')'.
// 'Dmnl' and '1' are the empty product. Throws InvalidParameter on bad input.
UnitExpr parse_units(const std::string& raw);

// Canonical source text; parsing it back reproduces the model's semantics.
std::string serialize(const ModelSpec& spec);

// Expression as canonical text, parenthesized to preserve tree shape.
std::string expr_text(const Expr& e);

// Name as it appears in source: double-quoted when it needs to be.
std::string name_token(const std::string& name);

}  // namespace sdsim
