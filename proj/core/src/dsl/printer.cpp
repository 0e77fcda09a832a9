#include "advisor/dsl/printer.hpp"

namespace advisor::dsl {
namespace {

constexpr std::string_view kIndent = "   ";

std::string indent(int depth) {
  std::string out;
  for (int i = 0; i < depth; ++i) out += kIndent;
  return out;
}

std::string term_source(const Term& t) {
  if (const auto* v = std::get_if<VariableRef>(&t)) return "?" + v->name;
  return advisor::to_source(std::get<Constant>(t).value);
}

std::string doc_source(const std::optional<std::string>& doc) {
  return doc ? " " + advisor::to_source(Value(String{*doc})) : "";
}

std::string pattern_source(const PatternCE& p) {
  std::string out;
  if (p.fact_binding) out += "?" + *p.fact_binding + " <- ";
  out += "(" + p.relation;
  for (const auto& s : p.slots) out += " (" + s.slot + " " + term_source(s.term) + ")";
  for (const auto& f : p.fields) out += " " + term_source(f);
  return out + ")";
}

std::string fact_source(const FactSpec& f) {
  std::string out = "(" + f.relation;
  for (const auto& s : f.slots) out += " (" + s.slot + " " + to_source(s.value) + ")";
  for (const auto& e : f.fields) out += " " + to_source(e);
  return out + ")";
}

void print_actions(std::string& out, const std::vector<Action>& actions, int depth);

void print_action(std::string& out, const Action& a, int depth) {
  out += "\n" + indent(depth);
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AssertAction>) {
          out += "(assert " + fact_source(node.fact) + ")";
        } else if constexpr (std::is_same_v<T, RetractAction>) {
          out += "(retract ?" + node.variable + ")";
        } else if constexpr (std::is_same_v<T, PrintoutAction>) {
          out += "(printout " + node.router;
          for (const auto& item : node.items) out += " " + to_source(item);
          out += ")";
        } else if constexpr (std::is_same_v<T, BindAction>) {
          out += "(bind ?" + node.variable + " " + to_source(node.value) + ")";
        } else if constexpr (std::is_same_v<T, OpenAction>) {
          out += "(open " + to_source(node.path) + " " + node.router + " " +
                 advisor::to_source(Value(String{node.mode})) + ")";
        } else {
          out += "(if " + to_source(node.condition);
          out += "\n" + indent(depth) + " then";
          print_actions(out, node.then_branch, depth + 1);
          if (!node.else_branch.empty()) {
            out += "\n" + indent(depth) + " else";
            print_actions(out, node.else_branch, depth + 1);
          }
          out += ")";
        }
      },
      a.node);
}

void print_actions(std::string& out, const std::vector<Action>& actions, int depth) {
  for (const auto& a : actions) print_action(out, a, depth);
}

}  // namespace

std::string to_source(const Expression& expr) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return advisor::to_source(node.value);
        } else if constexpr (std::is_same_v<T, VariableRef>) {
          return "?" + node.name;
        } else {
          std::string out = "(" + node.function;
          for (const auto& a : node.args) out += " " + to_source(a);
          return out + ")";
        }
      },
      expr.node);
}

std::string pretty_print(const Construct& construct) {
  std::string out;
  if (const auto* t = std::get_if<TemplateDef>(&construct)) {
    out = "(deftemplate " + t->name + doc_source(t->doc);
    for (const auto& s : t->slots) out += "\n" + indent(1) + "(slot " + s + ")";
    return out + ")";
  }
  if (const auto* d = std::get_if<DeffactsDef>(&construct)) {
    out = "(deffacts " + d->name + doc_source(d->doc);
    for (const auto& f : d->facts) out += "\n" + indent(1) + fact_source(f);
    return out + ")";
  }
  const auto& r = std::get<RuleDef>(construct);
  out = "(defrule " + r.name + doc_source(r.doc);
  if (r.salience != 0) {
    out += "\n" + indent(1) + "(declare (salience " + std::to_string(r.salience) + "))";
  }
  for (const auto& ce : r.lhs) {
    out += "\n" + indent(1);
    if (const auto* p = std::get_if<PatternCE>(&ce)) {
      out += pattern_source(*p);
    } else {
      out += "(test " + to_source(std::get<TestCE>(ce).expr) + ")";
    }
  }
  out += "\n" + indent(1) + "=>";
  print_actions(out, r.rhs, 1);
  return out + ")";
}

std::string pretty_print(const Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (i) out += "\n";
    out += pretty_print(program[i]) + "\n";
  }
  return out;
}

}  // namespace advisor::dsl
