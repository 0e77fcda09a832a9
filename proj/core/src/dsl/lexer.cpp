#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

#include "advisor/dsl/token.hpp"

namespace advisor::dsl {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_illegal(unsigned char c) { return (c < 0x20 && !is_space(c)) || c == 0x7f; }

bool is_delimiter(unsigned char c) {
  return is_space(c) || c == '(' || c == ')' || c == '"' || c == ';';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Scans [+-]?digits; returns position after the digits or npos if none.
std::size_t scan_digits(std::string_view s, std::size_t i) {
  const auto start = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  return i == start ? std::string_view::npos : i;
}

enum class NumberShape { None, Integer, Float };

NumberShape number_shape(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  bool int_digits = false;
  bool frac_digits = false;
  bool dot = false;
  while (i < s.size() && is_digit(s[i])) {
    ++i;
    int_digits = true;
  }
  if (i < s.size() && s[i] == '.') {
    dot = true;
    ++i;
    while (i < s.size() && is_digit(s[i])) {
      ++i;
      frac_digits = true;
    }
  }
  if (!int_digits && !frac_digits) return NumberShape::None;
  bool exponent = false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    const auto end = scan_digits(s, j);
    if (end == std::string_view::npos) return NumberShape::None;
    i = end;
    exponent = true;
  }
  if (i != s.size()) return NumberShape::None;
  return (dot || exponent) ? NumberShape::Float : NumberShape::Integer;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (is_space(c)) {
        advance();
      } else if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (is_illegal(c)) {
        throw LexError(LexErrc::IllegalCharacter, line_, column_,
                       "byte 0x" + hex(c));
      } else if (c == '(' || c == ')') {
        out.push_back(make(c == '(' ? TokenKind::LParen : TokenKind::RParen,
                           std::string(1, static_cast<char>(c)), pos_, 1));
        advance();
      } else if (c == '"') {
        out.push_back(lex_string());
      } else {
        out.push_back(lex_atom());
      }
    }
    return out;
  }

 private:
  static std::string hex(unsigned char c) {
    const char* digits = "0123456789abcdef";
    return {digits[c >> 4], digits[c & 0xf]};
  }

  void advance() {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    ++pos_;
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }

  Token make(TokenKind kind, std::string lexeme, std::size_t start, std::size_t length) const {
    Token t;
    t.kind = kind;
    t.lexeme = std::move(lexeme);
    t.line = line_;
    t.column = column_;
    t.offset = start;
    t.length = length;
    return t;
  }

  Token lex_string() {
    const int line = line_;
    const int column = column_;
    const auto start = pos_;
    advance();
    std::string text;
    while (true) {
      if (pos_ >= src_.size()) {
        throw LexError(LexErrc::UnterminatedString, line, column, "missing closing quote");
      }
      const char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();
      }
      text += src_[pos_];
      advance();
    }
    Token t = make(TokenKind::String, std::move(text), start, pos_ - start);
    t.line = line;
    t.column = column;
    return t;
  }

  Token lex_atom() {
    const int line = line_;
    const int column = column_;
    const auto start = pos_;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (is_delimiter(c)) break;
      if (is_illegal(c)) {
        throw LexError(LexErrc::IllegalCharacter, line_, column_, "byte 0x" + hex(c));
      }
      advance();
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    Token t;
    t.line = line;
    t.column = column;
    t.offset = start;
    t.length = text.size();
    if (text.size() > 1 && text[0] == '?') {
      t.kind = TokenKind::Variable;
      t.lexeme = std::string(text.substr(1));
      return t;
    }
    t.lexeme = std::string(text);
    switch (number_shape(text)) {
      case NumberShape::Integer:
        if (!classify_atom(text)) {
          throw LexError(LexErrc::NumberOutOfRange, line, column, t.lexeme);
        }
        t.kind = TokenKind::Integer;
        break;
      case NumberShape::Float:
        if (!classify_atom(text)) {
          throw LexError(LexErrc::NumberOutOfRange, line, column, t.lexeme);
        }
        t.kind = TokenKind::Float;
        break;
      case NumberShape::None:
        t.kind = TokenKind::Symbol;
        break;
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::Symbol: return "SYMBOL";
    case TokenKind::Variable: return "VARIABLE";
    case TokenKind::String: return "STRING";
    case TokenKind::Integer: return "INTEGER";
    case TokenKind::Float: return "FLOAT";
  }
  return "?";
}

std::string_view to_string(LexErrc code) {
  switch (code) {
    case LexErrc::UnterminatedString: return "UnterminatedString";
    case LexErrc::IllegalCharacter: return "IllegalCharacter";
    case LexErrc::NumberOutOfRange: return "NumberOutOfRange";
  }
  return "?";
}

LexError::LexError(LexErrc code, int line, int column, const std::string& detail)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         std::string(to_string(code)) + ": " + detail),
      code_(code),
      line_(line),
      column_(column) {}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::optional<Value> classify_atom(std::string_view text) {
  switch (number_shape(text)) {
    case NumberShape::Integer: {
      std::int64_t v = 0;
      const char* first = text.data();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
      return Value(v);
    }
    case NumberShape::Float: {
      double v = 0;
      const char* first = text.data();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
      return Value(v);
    }
    case NumberShape::None:
      break;
  }
  if (text == "TRUE") return Value(true);
  if (text == "FALSE") return Value(false);
  return Value(Symbol{std::string(text)});
}

bool is_plain_symbol(std::string_view text) {
  if (text.empty() || text[0] == '?') return false;
  for (unsigned char c : text) {
    if (is_delimiter(c) || is_illegal(c)) return false;
  }
  const auto v = classify_atom(text);
  return v && std::holds_alternative<Symbol>(*v);
}

}  // namespace advisor::dsl
