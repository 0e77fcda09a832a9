#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "advisor/value.hpp"

namespace advisor::dsl {

/// Position of a node's first token. Locations never take part in structural
/// equality, so a pretty-printed and re-parsed construct compares equal.
struct SourceLoc {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

struct VariableRef {
  std::string name;
  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

struct Constant {
  Value value;
  friend bool operator==(const Constant&, const Constant&) = default;
};

struct Expression;

struct Call {
  std::string function;
  std::vector<Expression> args;
};

struct Expression {
  std::variant<Constant, VariableRef, Call> node;
  SourceLoc loc;
};

bool operator==(const Call& a, const Call& b);
bool operator==(const Expression& a, const Expression& b);

/// Constraint term inside a pattern: a variable (binds or joins) or a literal.
using Term = std::variant<VariableRef, Constant>;

struct SlotConstraint {
  std::string slot;
  Term term;
  friend bool operator==(const SlotConstraint&, const SlotConstraint&) = default;
};

/// `(relation (slot term)...)` for template facts or `(relation term...)` for
/// ordered facts. At most one of `slots` / `fields` is non-empty.
struct PatternCE {
  std::string relation;
  std::vector<SlotConstraint> slots;
  std::vector<Term> fields;
  std::optional<std::string> fact_binding;
  SourceLoc loc;
  friend bool operator==(const PatternCE&, const PatternCE&) = default;
};

struct TestCE {
  Expression expr;
  SourceLoc loc;
  friend bool operator==(const TestCE&, const TestCE&) = default;
};

using ConditionalElement = std::variant<PatternCE, TestCE>;

struct SlotValue {
  std::string slot;
  Expression value;
  friend bool operator==(const SlotValue&, const SlotValue&) = default;
};

/// Fact constructor used by `assert` and `deffacts`.
struct FactSpec {
  std::string relation;
  std::vector<SlotValue> slots;
  std::vector<Expression> fields;
  SourceLoc loc;
  friend bool operator==(const FactSpec&, const FactSpec&) = default;
};

struct Action;

struct AssertAction {
  FactSpec fact;
  friend bool operator==(const AssertAction&, const AssertAction&) = default;
};

struct RetractAction {
  std::string variable;
  friend bool operator==(const RetractAction&, const RetractAction&) = default;
};

/// `crlf` items are kept as the symbol `crlf` and expanded when printed.
struct PrintoutAction {
  std::string router;
  std::vector<Expression> items;
  friend bool operator==(const PrintoutAction&, const PrintoutAction&) = default;
};

struct BindAction {
  std::string variable;
  Expression value;
  friend bool operator==(const BindAction&, const BindAction&) = default;
};

struct OpenAction {
  Expression path;
  std::string router;
  std::string mode;
  friend bool operator==(const OpenAction&, const OpenAction&) = default;
};

struct IfAction {
  Expression condition;
  std::vector<Action> then_branch;
  std::vector<Action> else_branch;
};

struct Action {
  std::variant<AssertAction, RetractAction, PrintoutAction, BindAction, OpenAction, IfAction> node;
  SourceLoc loc;
};

bool operator==(const IfAction& a, const IfAction& b);
bool operator==(const Action& a, const Action& b);

struct TemplateDef {
  std::string name;
  std::optional<std::string> doc;
  std::vector<std::string> slots;
  SourceLoc loc;
  friend bool operator==(const TemplateDef&, const TemplateDef&) = default;
};

struct RuleDef {
  std::string name;
  std::optional<std::string> doc;
  std::int64_t salience = 0;
  std::vector<ConditionalElement> lhs;
  std::vector<Action> rhs;
  SourceLoc loc;
  friend bool operator==(const RuleDef&, const RuleDef&) = default;
};

struct DeffactsDef {
  std::string name;
  std::optional<std::string> doc;
  std::vector<FactSpec> facts;
  SourceLoc loc;
  friend bool operator==(const DeffactsDef&, const DeffactsDef&) = default;
};

using Construct = std::variant<TemplateDef, RuleDef, DeffactsDef>;
using Program = std::vector<Construct>;

std::string_view construct_name(const Construct& c);
std::string_view construct_kind(const Construct& c);
SourceLoc construct_loc(const Construct& c);

inline constexpr std::int64_t kMinSalience = -10000;
inline constexpr std::int64_t kMaxSalience = 10000;

/// Functions callable in expressions: comparisons, eq/neq, and/or/not,
/// + - * / and read.
bool is_known_function(std::string_view name);

/// Relation asserted by reset; ordered, no fields.
inline constexpr std::string_view kInitialFact = "initial-fact";

}  // namespace advisor::dsl
