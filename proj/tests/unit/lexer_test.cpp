#include "advisor/dsl/token.hpp"

#include "doctest.h"

using namespace advisor;
using namespace advisor::dsl;

TEST_CASE("tokens carry kind, lexeme and position") {
  const auto t = tokenize("(defrule r\n  ?x <- (a \"s\\\"q\" 12 -3.5 1e3))");
  REQUIRE(t.size() == 13);
  CHECK(t[0].kind == TokenKind::LParen);
  CHECK(t[1].kind == TokenKind::Symbol);
  CHECK(t[1].lexeme == "defrule");
  CHECK(t[3].kind == TokenKind::Variable);
  CHECK(t[3].lexeme == "x");
  CHECK(t[3].line == 2);
  CHECK(t[3].column == 3);
  CHECK(t[4].lexeme == "<-");
  CHECK(t[5].line == 2);
  CHECK(t[5].column == 9);
  CHECK(t[7].kind == TokenKind::String);
  CHECK(t[7].lexeme == "s\"q");
  CHECK(t[8].kind == TokenKind::Integer);
  CHECK(t[9].kind == TokenKind::Float);
  CHECK(t[10].kind == TokenKind::Float);
  CHECK(t[12].kind == TokenKind::RParen);
}

TEST_CASE("hyphenated names are single symbols or variables") {
  const auto t = tokenize("ability-test-eng-per ?ability-test-eng-per - -type");
  REQUIRE(t.size() == 4);
  CHECK(t[0].lexeme == "ability-test-eng-per");
  CHECK(t[1].kind == TokenKind::Variable);
  CHECK(t[1].lexeme == "ability-test-eng-per");
  CHECK(t[2].kind == TokenKind::Symbol);
  CHECK(t[3].kind == TokenKind::Symbol);
}

TEST_CASE("comments run to end of line") {
  const auto t = tokenize("; header\n(a) ; trailing\n(b)");
  CHECK(t.size() == 6);
  CHECK(t[3].line == 3);
}

TEST_CASE("a lone question mark is a symbol") {
  const auto t = tokenize("? x");
  REQUIRE(t.size() == 2);
  CHECK(t[0].kind == TokenKind::Symbol);
  CHECK(t[0].lexeme == "?");
}

TEST_CASE("lexer errors report position") {
  try {
    tokenize("(a\n  \"open");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.code() == LexErrc::UnterminatedString);
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(tokenize("(a \x01)"), LexError);
  try {
    tokenize("99999999999999999999");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.code() == LexErrc::NumberOutOfRange);
  }
}

TEST_CASE("classify_atom") {
  CHECK(*classify_atom("60") == Value{std::int64_t{60}});
  CHECK(*classify_atom("-4") == Value{std::int64_t{-4}});
  CHECK(*classify_atom("75.5") == Value{75.5});
  CHECK(*classify_atom("TRUE") == Value{true});
  CHECK(*classify_atom("FALSE") == Value{false});
  CHECK(*classify_atom("Science") == Value{Symbol{"Science"}});
  CHECK_FALSE(classify_atom("123456789012345678901234").has_value());
  CHECK(is_plain_symbol("Ali_Khan"));
  CHECK_FALSE(is_plain_symbol("Ali Khan"));
  CHECK_FALSE(is_plain_symbol("12"));
  CHECK_FALSE(is_plain_symbol("TRUE"));
  CHECK_FALSE(is_plain_symbol(""));
  CHECK_FALSE(is_plain_symbol("?x"));
}

TEST_CASE("float formatting keeps a decimal point") {
  CHECK(format_float(60.0) == "60.0");
  CHECK(format_float(75.5) == "75.5");
  CHECK(format_float(0.1) == "0.1");
  CHECK(display(Value{std::int64_t{80}}) == "80");
  CHECK(display(Value{true}) == "TRUE");
  CHECK(display(Value{String{"a b"}}) == "a b");
  CHECK(to_source(Value{String{"a\"b"}}) == "\"a\\\"b\"");
}
