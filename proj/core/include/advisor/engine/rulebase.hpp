#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "advisor/dsl/ast.hpp"
#include "advisor/dsl/validate.hpp"

namespace advisor::engine {

struct TemplateInfo {
  std::string name;
  std::vector<std::string> slots;

  std::optional<std::size_t> slot_index(std::string_view slot) const;
};

/// Pattern with slot names resolved to value positions.
struct CompiledPattern {
  std::string relation;
  bool is_template = false;
  std::vector<std::pair<std::size_t, dsl::Term>> constraints;
  std::optional<std::string> fact_binding;
  /// Ordered patterns match only facts with exactly this many fields.
  std::size_t field_count = 0;
};

struct CompiledRule {
  const dsl::RuleDef* def = nullptr;
  std::vector<CompiledPattern> patterns;
  /// LHS in source order: pattern index or test expression.
  std::vector<std::variant<std::size_t, const dsl::Expression*>> steps;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<dsl::Diagnostic> diagnostics);
  const std::vector<dsl::Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<dsl::Diagnostic> diagnostics_;
};

/// Immutable, validated program ready for sessions. Safe to share across
/// threads.
class RuleBase {
 public:
  /// Validates and compiles. Throws ValidationError when diagnostics exist.
  static std::shared_ptr<const RuleBase> compile(dsl::Program program);

  const dsl::Program& program() const noexcept { return program_; }
  const std::vector<CompiledRule>& rules() const noexcept { return rules_; }
  const TemplateInfo* find_template(std::string_view name) const;
  std::vector<const dsl::DeffactsDef*> deffacts() const;

  RuleBase(const RuleBase&) = delete;
  RuleBase& operator=(const RuleBase&) = delete;

 private:
  explicit RuleBase(dsl::Program program);

  dsl::Program program_;
  std::map<std::string, TemplateInfo, std::less<>> templates_;
  std::vector<CompiledRule> rules_;
};

}  // namespace advisor::engine
