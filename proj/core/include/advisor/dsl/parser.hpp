#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "advisor/dsl/ast.hpp"
#include "advisor/dsl/token.hpp"

namespace advisor::dsl {

enum class ParseErrc { UnexpectedToken, UnbalancedParens, UnknownConstruct };

std::string_view to_string(ParseErrc code);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrc code, int line, int column, const std::string& detail);

  ParseErrc code() const noexcept { return code_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  ParseErrc code_;
  int line_;
  int column_;
};

/// Builds constructs from tokens in source order. Top-level forms must be
/// deftemplate, defrule or deffacts.
Program parse_program(std::span<const Token> tokens);

/// tokenize + parse_program. Throws LexError or ParseError.
Program parse_source(std::string_view source);

/// Parses a single expression such as `(>= ?x 60)`.
Expression parse_expression(std::string_view source);

}  // namespace advisor::dsl
