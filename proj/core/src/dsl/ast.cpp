#include "advisor/dsl/ast.hpp"

#include <algorithm>
#include <array>

namespace advisor::dsl {

bool operator==(const Call& a, const Call& b) {
  return a.function == b.function && a.args == b.args;
}

bool operator==(const Expression& a, const Expression& b) { return a.node == b.node; }

bool operator==(const IfAction& a, const IfAction& b) {
  return a.condition == b.condition && a.then_branch == b.then_branch &&
         a.else_branch == b.else_branch;
}

bool operator==(const Action& a, const Action& b) { return a.node == b.node; }

bool is_known_function(std::string_view name) {
  static constexpr std::array<std::string_view, 14> kFunctions = {
      ">=", ">", "<=", "<", "eq", "neq", "and", "or", "not", "+", "-", "*", "/", "read"};
  return std::find(kFunctions.begin(), kFunctions.end(), name) != kFunctions.end();
}

std::string_view construct_name(const Construct& c) {
  return std::visit([](const auto& def) -> std::string_view { return def.name; }, c);
}

std::string_view construct_kind(const Construct& c) {
  switch (c.index()) {
    case 0: return "deftemplate";
    case 1: return "defrule";
    default: return "deffacts";
  }
}

SourceLoc construct_loc(const Construct& c) {
  return std::visit([](const auto& def) { return def.loc; }, c);
}

}  // namespace advisor::dsl
