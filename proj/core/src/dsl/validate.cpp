#include "advisor/dsl/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace advisor::dsl {
namespace {

bool is_comparison(std::string_view f) {
  return f == ">=" || f == ">" || f == "<=" || f == "<" || f == "eq" || f == "neq";
}
bool is_logical(std::string_view f) { return f == "and" || f == "or" || f == "not"; }
bool is_arithmetic(std::string_view f) { return f == "+" || f == "-" || f == "*" || f == "/"; }

struct Scope {
  std::set<std::string> bound;
  std::set<std::string> fact_vars;
};

class Validator {
 public:
  explicit Validator(const Program& program) : program_(program) {
    for (const auto& c : program_) {
      if (const auto* t = std::get_if<TemplateDef>(&c)) templates_.emplace(t->name, t);
    }
  }

  std::vector<Diagnostic> run() {
    std::set<std::pair<std::size_t, std::string>> seen;
    for (const auto& c : program_) {
      construct_ = std::string(construct_name(c));
      kind_ = std::string(construct_kind(c)).substr(3);
      if (!seen.emplace(c.index(), construct_).second) {
        report(DiagnosticCode::DuplicateConstruct, construct_, construct_loc(c),
               "duplicate " + std::string(construct_kind(c)));
      }
      std::visit([this](const auto& def) { check(def); }, c);
    }
    return std::move(out_);
  }

 private:
  void report(DiagnosticCode code, std::string subject, SourceLoc loc, std::string message) {
    out_.push_back({code, kind_ + " " + construct_, std::move(subject), std::move(message), loc});
  }

  const TemplateDef* find_template(const std::string& name) const {
    const auto it = templates_.find(name);
    return it == templates_.end() ? nullptr : it->second;
  }

  bool has_slot(const TemplateDef& t, const std::string& slot) const {
    return std::find(t.slots.begin(), t.slots.end(), slot) != t.slots.end();
  }

  void check(const TemplateDef& t) {
    if (t.slots.empty()) report(DiagnosticCode::EmptyTemplate, t.name, t.loc, "template has no slots");
    std::set<std::string> names;
    for (const auto& s : t.slots) {
      if (!names.insert(s).second) report(DiagnosticCode::DuplicateSlot, s, t.loc, "slot declared twice");
    }
  }

  void check(const RuleDef& r) {
    if (r.salience < kMinSalience || r.salience > kMaxSalience) {
      report(DiagnosticCode::SalienceOutOfRange, std::to_string(r.salience), r.loc,
             "salience must be within [-10000, 10000]");
    }
    Scope scope;
    for (const auto& ce : r.lhs) {
      if (const auto* p = std::get_if<PatternCE>(&ce)) {
        check_pattern(*p, scope);
      } else {
        const auto& test = std::get<TestCE>(ce);
        check_boolean(test.expr, scope);
      }
    }
    check_actions(r.rhs, scope);
  }

  void check(const DeffactsDef& d) {
    Scope empty;
    for (const auto& f : d.facts) check_fact(f, empty);
  }

  // Shared template/ordered shape check for patterns and fact constructors.
  // Returns the template when slot names should be checked against it.
  const TemplateDef* check_shape(const std::string& relation, bool has_slots, bool has_fields,
                                 SourceLoc loc) {
    const TemplateDef* t = find_template(relation);
    if (t && has_fields) {
      report(DiagnosticCode::FactFormMismatch, relation, loc,
             "template fact written with positional fields");
      return nullptr;
    }
    if (!t && has_slots) {
      report(DiagnosticCode::UndefinedTemplate, relation, loc, "no deftemplate named " + relation);
    }
    return t;
  }

  void check_slot_name(const TemplateDef& t, const std::string& slot, std::set<std::string>& used,
                       SourceLoc loc) {
    if (!has_slot(t, slot)) {
      report(DiagnosticCode::UnknownSlot, slot, loc, "template " + t.name + " has no slot " + slot);
    } else if (!used.insert(slot).second) {
      report(DiagnosticCode::DuplicateSlot, slot, loc, "slot given twice");
    }
  }

  void check_pattern(const PatternCE& p, Scope& scope) {
    const TemplateDef* t = check_shape(p.relation, !p.slots.empty(), !p.fields.empty(), p.loc);
    std::set<std::string> used;
    auto bind_term = [&](const Term& term) {
      if (const auto* v = std::get_if<VariableRef>(&term)) scope.bound.insert(v->name);
    };
    for (const auto& c : p.slots) {
      if (t) check_slot_name(*t, c.slot, used, p.loc);
      bind_term(c.term);
    }
    for (const auto& f : p.fields) bind_term(f);
    if (p.fact_binding) {
      if (scope.bound.count(*p.fact_binding)) {
        report(DiagnosticCode::RebindFactVariable, *p.fact_binding, p.loc,
               "variable already bound before fact binding");
      }
      scope.bound.insert(*p.fact_binding);
      scope.fact_vars.insert(*p.fact_binding);
    }
  }

  void check_fact(const FactSpec& f, const Scope& scope) {
    const TemplateDef* t = check_shape(f.relation, !f.slots.empty(), !f.fields.empty(), f.loc);
    std::set<std::string> used;
    for (const auto& s : f.slots) {
      if (t) check_slot_name(*t, s.slot, used, f.loc);
      check_expr(s.value, scope);
    }
    for (const auto& e : f.fields) check_expr(e, scope);
  }

  void check_expr(const Expression& e, const Scope& scope) {
    if (const auto* v = std::get_if<VariableRef>(&e.node)) {
      if (!scope.bound.count(v->name)) {
        report(DiagnosticCode::UnboundVariable, v->name, e.loc, "?" + v->name + " is never bound");
      }
      return;
    }
    const auto* call = std::get_if<Call>(&e.node);
    if (!call) return;
    const auto& f = call->function;
    const auto n = call->args.size();
    if (!is_known_function(f)) {
      report(DiagnosticCode::UnknownFunction, f, e.loc, "unknown function " + f);
    } else if (is_comparison(f) && n != 2) {
      report(DiagnosticCode::BadArity, f, e.loc, f + " takes exactly 2 arguments");
    } else if ((f == "and" || f == "or") && n < 2) {
      report(DiagnosticCode::BadArity, f, e.loc, f + " takes at least 2 arguments");
    } else if (f == "not" && n != 1) {
      report(DiagnosticCode::BadArity, f, e.loc, "not takes exactly 1 argument");
    } else if (is_arithmetic(f) && n < 1) {
      report(DiagnosticCode::BadArity, f, e.loc, f + " takes at least 1 argument");
    } else if (f == "read") {
      if (n > 1) {
        report(DiagnosticCode::BadArity, f, e.loc, "read takes at most 1 argument");
      } else if (n == 1) {
        const auto* c = std::get_if<Constant>(&call->args[0].node);
        if (!c || !std::holds_alternative<Symbol>(c->value)) {
          report(DiagnosticCode::InvalidRouter, f, e.loc, "read expects a router name");
        }
      }
      return;
    }
    if (is_logical(f)) {
      for (const auto& a : call->args) check_boolean(a, scope);
    } else {
      for (const auto& a : call->args) check_expr(a, scope);
    }
  }

  void check_boolean(const Expression& e, const Scope& scope) {
    check_expr(e, scope);
    bool ok = std::holds_alternative<VariableRef>(e.node);
    if (const auto* c = std::get_if<Constant>(&e.node)) ok = std::holds_alternative<bool>(c->value);
    if (const auto* call = std::get_if<Call>(&e.node)) {
      ok = is_comparison(call->function) || is_logical(call->function) ||
           !is_known_function(call->function);  // already reported as unknown
    }
    if (!ok) report(DiagnosticCode::NonBooleanTest, "", e.loc, "expression is not boolean");
  }

  void check_actions(const std::vector<Action>& actions, Scope& scope) {
    for (const auto& a : actions) {
      std::visit([&](const auto& node) { check_action(node, a.loc, scope); }, a.node);
    }
  }

  void check_action(const AssertAction& a, SourceLoc, Scope& scope) { check_fact(a.fact, scope); }

  void check_action(const RetractAction& a, SourceLoc loc, Scope& scope) {
    if (!scope.bound.count(a.variable)) {
      report(DiagnosticCode::UnboundVariable, a.variable, loc, "?" + a.variable + " is never bound");
    } else if (!scope.fact_vars.count(a.variable)) {
      report(DiagnosticCode::NotAFactVariable, a.variable, loc,
             "retract needs a variable bound with <-");
    }
  }

  void check_action(const PrintoutAction& a, SourceLoc, Scope& scope) {
    for (const auto& item : a.items) check_expr(item, scope);
  }

  void check_action(const BindAction& a, SourceLoc, Scope& scope) {
    check_expr(a.value, scope);
    scope.bound.insert(a.variable);
    scope.fact_vars.erase(a.variable);
  }

  void check_action(const OpenAction& a, SourceLoc loc, Scope& scope) {
    check_expr(a.path, scope);
    if (a.router == "t") report(DiagnosticCode::InvalidRouter, a.router, loc, "router t cannot be opened");
    if (a.mode != "r" && a.mode != "w" && a.mode != "a") {
      report(DiagnosticCode::InvalidOpenMode, a.mode, loc, "open mode must be \"r\", \"w\" or \"a\"");
    }
  }

  void check_action(const IfAction& a, SourceLoc, Scope& scope) {
    check_boolean(a.condition, scope);
    Scope then_scope = scope;
    check_actions(a.then_branch, then_scope);
    Scope else_scope = scope;
    check_actions(a.else_branch, else_scope);
  }

  const Program& program_;
  std::map<std::string, const TemplateDef*> templates_;
  std::vector<Diagnostic> out_;
  std::string construct_;
  std::string kind_;
};

}  // namespace

std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::UndefinedTemplate: return "UndefinedTemplate";
    case DiagnosticCode::UnknownSlot: return "UnknownSlot";
    case DiagnosticCode::DuplicateSlot: return "DuplicateSlot";
    case DiagnosticCode::EmptyTemplate: return "EmptyTemplate";
    case DiagnosticCode::DuplicateConstruct: return "DuplicateConstruct";
    case DiagnosticCode::FactFormMismatch: return "FactFormMismatch";
    case DiagnosticCode::UnboundVariable: return "UnboundVariable";
    case DiagnosticCode::NotAFactVariable: return "NotAFactVariable";
    case DiagnosticCode::RebindFactVariable: return "RebindFactVariable";
    case DiagnosticCode::SalienceOutOfRange: return "SalienceOutOfRange";
    case DiagnosticCode::UnknownFunction: return "UnknownFunction";
    case DiagnosticCode::BadArity: return "BadArity";
    case DiagnosticCode::NonBooleanTest: return "NonBooleanTest";
    case DiagnosticCode::InvalidRouter: return "InvalidRouter";
    case DiagnosticCode::InvalidOpenMode: return "InvalidOpenMode";
  }
  return "?";
}

std::string format(const Diagnostic& d) {
  std::string out = d.construct + " " + std::to_string(d.loc.line) + ":" +
                    std::to_string(d.loc.column) + ": " + std::string(to_string(d.code));
  if (!d.subject.empty()) out += " " + d.subject;
  if (!d.message.empty()) out += ": " + d.message;
  return out;
}

std::vector<Diagnostic> validate(const Program& program) { return Validator(program).run(); }

}  // namespace advisor::dsl
