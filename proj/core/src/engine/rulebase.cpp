#include "advisor/engine/rulebase.hpp"

#include <algorithm>

#include "advisor/engine/errors.hpp"

namespace advisor::engine {
namespace {

std::string summarize(const std::vector<dsl::Diagnostic>& diagnostics) {
  std::string out = std::to_string(diagnostics.size()) + " diagnostic(s)";
  if (!diagnostics.empty()) out += "; first: " + dsl::format(diagnostics.front());
  return out;
}

}  // namespace

std::string_view to_string(EngineErrc code) {
  switch (code) {
    case EngineErrc::UnknownTemplate: return "UnknownTemplate";
    case EngineErrc::UnknownSlot: return "UnknownSlot";
    case EngineErrc::FactShapeMismatch: return "FactShapeMismatch";
    case EngineErrc::UnknownFact: return "UnknownFact";
    case EngineErrc::TypeMismatch: return "TypeMismatch";
    case EngineErrc::UnboundVariable: return "UnboundVariable";
    case EngineErrc::RouterNotOpen: return "RouterNotOpen";
    case EngineErrc::RouterAlreadyOpen: return "RouterAlreadyOpen";
    case EngineErrc::OpenFailed: return "OpenFailed";
    case EngineErrc::DivisionByZero: return "DivisionByZero";
    case EngineErrc::IntegerOverflow: return "IntegerOverflow";
    case EngineErrc::InvalidNumber: return "InvalidNumber";
    case EngineErrc::EofInFact: return "EofInFact";
    case EngineErrc::InvalidProgram: return "InvalidProgram";
  }
  return "?";
}

EngineError::EngineError(EngineErrc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

ValidationError::ValidationError(std::vector<dsl::Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::optional<std::size_t> TemplateInfo::slot_index(std::string_view slot) const {
  const auto it = std::find(slots.begin(), slots.end(), slot);
  if (it == slots.end()) return std::nullopt;
  return static_cast<std::size_t>(it - slots.begin());
}

std::shared_ptr<const RuleBase> RuleBase::compile(dsl::Program program) {
  auto diagnostics = dsl::validate(program);
  if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
  return std::shared_ptr<const RuleBase>(new RuleBase(std::move(program)));
}

RuleBase::RuleBase(dsl::Program program) : program_(std::move(program)) {
  for (const auto& c : program_) {
    if (const auto* t = std::get_if<dsl::TemplateDef>(&c)) {
      templates_.emplace(t->name, TemplateInfo{t->name, t->slots});
    }
  }
  for (const auto& c : program_) {
    const auto* r = std::get_if<dsl::RuleDef>(&c);
    if (!r) continue;
    CompiledRule rule;
    rule.def = r;
    const bool has_pattern = std::any_of(r->lhs.begin(), r->lhs.end(), [](const auto& ce) {
      return std::holds_alternative<dsl::PatternCE>(ce);
    });
    if (!has_pattern) {
      rule.patterns.push_back({std::string(dsl::kInitialFact), false, {}, std::nullopt, 0});
      rule.steps.emplace_back(std::size_t{0});
    }
    for (const auto& ce : r->lhs) {
      if (const auto* test = std::get_if<dsl::TestCE>(&ce)) {
        rule.steps.emplace_back(&test->expr);
        continue;
      }
      const auto& p = std::get<dsl::PatternCE>(ce);
      CompiledPattern cp;
      cp.relation = p.relation;
      cp.fact_binding = p.fact_binding;
      if (const TemplateInfo* t = find_template(p.relation)) {
        cp.is_template = true;
        for (const auto& s : p.slots) cp.constraints.emplace_back(*t->slot_index(s.slot), s.term);
      } else {
        for (std::size_t i = 0; i < p.fields.size(); ++i) cp.constraints.emplace_back(i, p.fields[i]);
      }
      cp.field_count = p.fields.size();
      rule.steps.emplace_back(rule.patterns.size());
      rule.patterns.push_back(std::move(cp));
    }
    rules_.push_back(std::move(rule));
  }
}

const TemplateInfo* RuleBase::find_template(std::string_view name) const {
  const auto it = templates_.find(name);
  return it == templates_.end() ? nullptr : &it->second;
}

std::vector<const dsl::DeffactsDef*> RuleBase::deffacts() const {
  std::vector<const dsl::DeffactsDef*> out;
  for (const auto& c : program_) {
    if (const auto* d = std::get_if<dsl::DeffactsDef>(&c)) out.push_back(d);
  }
  return out;
}

}  // namespace advisor::engine
