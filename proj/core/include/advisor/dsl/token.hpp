#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "advisor/value.hpp"

namespace advisor::dsl {

enum class TokenKind { LParen, RParen, Symbol, Variable, String, Integer, Float };

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Symbol;
  /// Variables drop the leading `?`; strings drop the quotes and escapes.
  std::string lexeme;
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
  std::size_t length = 0;  // bytes of source covered, quotes included
};

enum class LexErrc { UnterminatedString, IllegalCharacter, NumberOutOfRange };

std::string_view to_string(LexErrc code);

class LexError : public std::runtime_error {
 public:
  LexError(LexErrc code, int line, int column, const std::string& detail);

  LexErrc code() const noexcept { return code_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  LexErrc code_;
  int line_;
  int column_;
};

/// Splits rule source into tokens. `;` starts a comment running to end of
/// line. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

/// Classifies a bare atom the way the lexer would: integer, float, TRUE/FALSE
/// or symbol. Returns nullopt for an integer literal that does not fit in
/// 64 bits.
std::optional<Value> classify_atom(std::string_view text);

/// True if `text` lexes as a single SYMBOL token that is not a number or
/// boolean.
bool is_plain_symbol(std::string_view text);

}  // namespace advisor::dsl
