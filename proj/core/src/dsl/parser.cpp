#include "advisor/dsl/parser.hpp"

#include <memory>

namespace advisor::dsl {
namespace {

constexpr std::size_t kMaxDepth = 200;

// Generic S-expression layer; constructs are built from this tree so paren
// balancing is handled in one place.
struct SExpr {
  const Token* open = nullptr;   // LParen for lists, the atom itself otherwise
  const Token* close = nullptr;  // RParen for lists
  std::vector<SExpr> items;
  bool is_list = false;

  const Token& token() const { return *open; }
  bool is_atom(TokenKind kind) const { return !is_list && open->kind == kind; }
  bool is_symbol(std::string_view text) const {
    return is_atom(TokenKind::Symbol) && open->lexeme == text;
  }
  // Symbol at the head of a list, or empty.
  std::string_view head() const {
    if (!is_list || items.empty() || !items[0].is_atom(TokenKind::Symbol)) return {};
    return items[0].open->lexeme;
  }
};

[[noreturn]] void fail(ParseErrc code, const Token& at, const std::string& detail) {
  throw ParseError(code, at.line, at.column, detail);
}

[[noreturn]] void unexpected(const SExpr& at, const std::string& detail) {
  fail(ParseErrc::UnexpectedToken, at.token(), detail);
}

SourceLoc loc_of(const SExpr& e) { return {e.open->line, e.open->column}; }

std::vector<SExpr> build_forest(std::span<const Token> tokens) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::LParen) {
      if (stack.size() >= kMaxDepth) fail(ParseErrc::UnexpectedToken, t, "nesting too deep");
      SExpr list;
      list.open = &t;
      list.is_list = true;
      stack.push_back(std::move(list));
    } else if (t.kind == TokenKind::RParen) {
      if (stack.empty()) fail(ParseErrc::UnbalancedParens, t, "unmatched ')'");
      SExpr done = std::move(stack.back());
      stack.pop_back();
      done.close = &t;
      (stack.empty() ? top : stack.back().items).push_back(std::move(done));
    } else {
      SExpr atom;
      atom.open = &t;
      if (stack.empty()) fail(ParseErrc::UnexpectedToken, t, "expected '(' at top level");
      stack.back().items.push_back(std::move(atom));
    }
  }
  if (!stack.empty()) fail(ParseErrc::UnbalancedParens, *stack.back().open, "unclosed '('");
  return top;
}

class ConstructBuilder {
 public:
  Construct build(const SExpr& form) {
    const auto head = form.head();
    if (head == "deftemplate") return build_template(form);
    if (head == "defrule") return build_rule(form);
    if (head == "deffacts") return build_deffacts(form);
    if (form.items.empty()) fail(ParseErrc::UnknownConstruct, form.token(), "empty form");
    fail(ParseErrc::UnknownConstruct, form.items[0].token(),
         "unknown construct '" + form.items[0].token().lexeme + "'");
  }

  Expression expression(const SExpr& e) {
    Expression out;
    out.loc = loc_of(e);
    if (!e.is_list) {
      if (e.token().kind == TokenKind::Variable) {
        out.node = VariableRef{e.token().lexeme};
      } else {
        out.node = Constant{literal(e)};
      }
      return out;
    }
    if (e.items.empty()) unexpected(e, "empty expression");
    if (!e.items[0].is_atom(TokenKind::Symbol)) unexpected(e.items[0], "expected function name");
    Call call;
    call.function = e.items[0].token().lexeme;
    for (std::size_t i = 1; i < e.items.size(); ++i) call.args.push_back(expression(e.items[i]));
    out.node = std::move(call);
    return out;
  }

 private:
  // Index after the optional name and doc string.
  std::size_t header(const SExpr& form, std::string& name, std::optional<std::string>& doc) {
    if (form.items.size() < 2 || !form.items[1].is_atom(TokenKind::Symbol)) {
      unexpected(form.items.size() < 2 ? form : form.items[1],
                 "expected name after " + std::string(form.head()));
    }
    name = form.items[1].token().lexeme;
    std::size_t i = 2;
    if (i < form.items.size() && form.items[i].is_atom(TokenKind::String)) {
      doc = form.items[i].token().lexeme;
      ++i;
    }
    return i;
  }

  TemplateDef build_template(const SExpr& form) {
    TemplateDef def;
    def.loc = loc_of(form);
    for (std::size_t i = header(form, def.name, def.doc); i < form.items.size(); ++i) {
      const SExpr& slot = form.items[i];
      if (slot.head() == "multislot") unexpected(slot, "multislot is not supported");
      if (slot.head() != "slot") unexpected(slot, "expected (slot <name>)");
      if (slot.items.size() != 2 || !slot.items[1].is_atom(TokenKind::Symbol)) {
        unexpected(slot, "slot takes exactly one name and no facets");
      }
      def.slots.push_back(slot.items[1].token().lexeme);
    }
    return def;
  }

  RuleDef build_rule(const SExpr& form) {
    RuleDef def;
    def.loc = loc_of(form);
    std::size_t i = header(form, def.name, def.doc);
    if (i < form.items.size() && form.items[i].head() == "declare") {
      def.salience = salience(form.items[i]);
      ++i;
    }
    bool arrow = false;
    for (; i < form.items.size(); ++i) {
      const SExpr& item = form.items[i];
      if (item.is_symbol("=>")) {
        arrow = true;
        ++i;
        break;
      }
      if (item.is_atom(TokenKind::Variable)) {
        if (i + 2 >= form.items.size() || !form.items[i + 1].is_symbol("<-") ||
            !form.items[i + 2].is_list) {
          unexpected(item, "expected ?var <- (pattern)");
        }
        PatternCE p = pattern(form.items[i + 2]);
        p.fact_binding = item.token().lexeme;
        p.loc = loc_of(item);
        def.lhs.emplace_back(std::move(p));
        i += 2;
      } else if (item.head() == "declare") {
        unexpected(item, "declare must come before the first conditional element");
      } else if (item.head() == "test") {
        if (item.items.size() != 2) unexpected(item, "test takes exactly one expression");
        def.lhs.emplace_back(TestCE{expression(item.items[1]), loc_of(item)});
      } else if (item.is_list) {
        def.lhs.emplace_back(pattern(item));
      } else {
        unexpected(item, "expected a conditional element or =>");
      }
    }
    if (!arrow) fail(ParseErrc::UnexpectedToken, *form.close, "rule is missing =>");
    for (; i < form.items.size(); ++i) def.rhs.push_back(action(form.items[i]));
    return def;
  }

  std::int64_t salience(const SExpr& decl) {
    if (decl.items.size() != 2 || decl.items[1].head() != "salience") {
      unexpected(decl, "only (declare (salience <int>)) is supported");
    }
    const SExpr& s = decl.items[1];
    if (s.items.size() != 2 || !s.items[1].is_atom(TokenKind::Integer)) {
      unexpected(s, "salience must be an integer");
    }
    return std::get<std::int64_t>(literal(s.items[1]));
  }

  DeffactsDef build_deffacts(const SExpr& form) {
    DeffactsDef def;
    def.loc = loc_of(form);
    for (std::size_t i = header(form, def.name, def.doc); i < form.items.size(); ++i) {
      def.facts.push_back(fact_spec(form.items[i]));
    }
    return def;
  }

  // A child list headed by a non-function symbol selects slot form.
  static bool slot_form(const SExpr& list) {
    for (std::size_t i = 1; i < list.items.size(); ++i) {
      const auto h = list.items[i].head();
      if (!h.empty() && !is_known_function(h)) return true;
    }
    return false;
  }

  static void check_relation(const SExpr& list) {
    if (!list.is_list) unexpected(list, "expected a parenthesized fact");
    if (list.items.empty() || !list.items[0].is_atom(TokenKind::Symbol)) {
      unexpected(list, "expected relation name");
    }
    static constexpr std::string_view kUnsupported[] = {"not", "or", "and", "exists", "forall",
                                                        "logical", "test"};
    for (auto word : kUnsupported) {
      if (list.head() == word) unexpected(list, "conditional element '" + std::string(word) + "' is not supported here");
    }
  }

  const SExpr& slot_pair(const SExpr& item) {
    if (!item.is_list || item.items.empty() || !item.items[0].is_atom(TokenKind::Symbol)) {
      unexpected(item, "expected (slot value)");
    }
    if (item.items.size() != 2) {
      unexpected(item, "slot '" + item.items[0].token().lexeme + "' takes exactly one value");
    }
    return item.items[1];
  }

  Term term(const SExpr& e) {
    if (e.is_list) unexpected(e, "pattern terms must be variables or literals");
    if (e.token().kind == TokenKind::Variable) return VariableRef{e.token().lexeme};
    return Constant{literal(e)};
  }

  PatternCE pattern(const SExpr& list) {
    check_relation(list);
    PatternCE p;
    p.relation = list.items[0].token().lexeme;
    p.loc = loc_of(list);
    const bool slots = slot_form(list);
    for (std::size_t i = 1; i < list.items.size(); ++i) {
      const SExpr& item = list.items[i];
      if (slots) {
        const SExpr& value = slot_pair(item);
        p.slots.push_back({item.items[0].token().lexeme, term(value)});
      } else {
        p.fields.push_back(term(item));
      }
    }
    return p;
  }

  FactSpec fact_spec(const SExpr& list) {
    check_relation(list);
    FactSpec f;
    f.relation = list.items[0].token().lexeme;
    f.loc = loc_of(list);
    const bool slots = slot_form(list);
    for (std::size_t i = 1; i < list.items.size(); ++i) {
      const SExpr& item = list.items[i];
      if (slots) {
        const SExpr& value = slot_pair(item);
        f.slots.push_back({item.items[0].token().lexeme, expression(value)});
      } else {
        f.fields.push_back(expression(item));
      }
    }
    return f;
  }

  std::string variable_arg(const SExpr& e, std::string_view what) {
    if (!e.is_atom(TokenKind::Variable)) unexpected(e, std::string(what) + " expects a variable");
    return e.token().lexeme;
  }

  std::string symbol_arg(const SExpr& e, std::string_view what) {
    if (!e.is_atom(TokenKind::Symbol)) unexpected(e, std::string(what) + " expects a router name");
    return e.token().lexeme;
  }

  Action action(const SExpr& e) {
    Action out;
    out.loc = loc_of(e);
    const auto head = e.head();
    if (head.empty()) unexpected(e, "expected an action");
    const auto argc = e.items.size() - 1;
    if (head == "assert") {
      if (argc != 1) unexpected(e, "assert takes exactly one fact");
      out.node = AssertAction{fact_spec(e.items[1])};
    } else if (head == "retract") {
      if (argc != 1) unexpected(e, "retract takes exactly one fact variable");
      out.node = RetractAction{variable_arg(e.items[1], "retract")};
    } else if (head == "printout") {
      if (argc < 1) unexpected(e, "printout needs a router");
      PrintoutAction p;
      p.router = symbol_arg(e.items[1], "printout");
      for (std::size_t i = 2; i < e.items.size(); ++i) p.items.push_back(expression(e.items[i]));
      out.node = std::move(p);
    } else if (head == "bind") {
      if (argc != 2) unexpected(e, "bind takes a variable and a value");
      out.node = BindAction{variable_arg(e.items[1], "bind"), expression(e.items[2])};
    } else if (head == "open") {
      if (argc != 3 || !e.items[3].is_atom(TokenKind::String)) {
        unexpected(e, "expected (open <path> <router> \"<mode>\")");
      }
      out.node = OpenAction{expression(e.items[1]), symbol_arg(e.items[2], "open"),
                            e.items[3].token().lexeme};
    } else if (head == "if") {
      out.node = if_action(e);
    } else {
      unexpected(e.items[0], "unknown action '" + std::string(head) + "'");
    }
    return out;
  }

  IfAction if_action(const SExpr& e) {
    if (e.items.size() < 3 || !e.items[2].is_symbol("then")) {
      unexpected(e, "expected (if <expr> then ... [else ...])");
    }
    IfAction out;
    out.condition = expression(e.items[1]);
    bool in_else = false;
    for (std::size_t i = 3; i < e.items.size(); ++i) {
      if (e.items[i].is_symbol("else")) {
        if (in_else) unexpected(e.items[i], "duplicate else");
        in_else = true;
        continue;
      }
      (in_else ? out.else_branch : out.then_branch).push_back(action(e.items[i]));
    }
    return out;
  }

  static Value literal(const SExpr& e) {
    const Token& t = e.token();
    switch (t.kind) {
      case TokenKind::String:
        return String{t.lexeme};
      case TokenKind::Integer:
      case TokenKind::Float:
      case TokenKind::Symbol:
        if (auto v = classify_atom(t.lexeme)) return *v;
        fail(ParseErrc::UnexpectedToken, t, "bad literal");
      default:
        fail(ParseErrc::UnexpectedToken, t, "expected a literal");
    }
  }
};

}  // namespace

std::string_view to_string(ParseErrc code) {
  switch (code) {
    case ParseErrc::UnexpectedToken: return "UnexpectedToken";
    case ParseErrc::UnbalancedParens: return "UnbalancedParens";
    case ParseErrc::UnknownConstruct: return "UnknownConstruct";
  }
  return "?";
}

ParseError::ParseError(ParseErrc code, int line, int column, const std::string& detail)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         std::string(to_string(code)) + ": " + detail),
      code_(code),
      line_(line),
      column_(column) {}

Program parse_program(std::span<const Token> tokens) {
  const auto forest = build_forest(tokens);
  ConstructBuilder builder;
  Program program;
  program.reserve(forest.size());
  for (const SExpr& form : forest) program.push_back(builder.build(form));
  return program;
}

Program parse_source(std::string_view source) {
  const auto tokens = tokenize(source);
  return parse_program(tokens);
}

Expression parse_expression(std::string_view source) {
  const auto tokens = tokenize(source);
  if (tokens.empty()) throw ParseError(ParseErrc::UnexpectedToken, 1, 1, "empty expression");
  if (tokens.size() == 1) {
    if (tokens[0].kind == TokenKind::LParen || tokens[0].kind == TokenKind::RParen) {
      throw ParseError(ParseErrc::UnbalancedParens, 1, 1, "stray paren");
    }
    SExpr atom;
    atom.open = &tokens[0];
    return ConstructBuilder().expression(atom);
  }
  const auto forest = build_forest(tokens);
  if (forest.size() != 1) {
    throw ParseError(ParseErrc::UnexpectedToken, tokens[0].line, tokens[0].column,
                     "expected a single expression");
  }
  return ConstructBuilder().expression(forest[0]);
}

}  // namespace advisor::dsl
