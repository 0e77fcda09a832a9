#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "advisor/dsl/ast.hpp"
#include "advisor/dsl/validate.hpp"
#include "advisor/engine/rulebase.hpp"

namespace advisor::kb {

struct KbSource {
  std::string name;  // file name used in error messages
  std::string text;
};

/// The three shipped files: student template, readtextfiledata, fo-Mathematics.
std::span<const KbSource> shipped_kb_sources();

class KbError : public std::runtime_error {
 public:
  enum class Kind { Io, Parse, Validation };

  KbError(Kind kind, std::string file, int line, const std::string& message,
          std::vector<dsl::Diagnostic> diagnostics = {});

  Kind kind() const noexcept { return kind_; }
  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }
  const std::vector<dsl::Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  Kind kind_;
  std::string file_;
  int line_;
  std::vector<dsl::Diagnostic> diagnostics_;
};

/// A validated rule program. Immutable and cheap to copy; share freely
/// across threads.
class KnowledgeBase {
 public:
  /// Parses each source, concatenates the constructs in order and validates
  /// the result. Throws KbError.
  static KnowledgeBase from_sources(std::span<const KbSource> sources);

  const dsl::Program& program() const noexcept { return rules_->program(); }
  const std::shared_ptr<const engine::RuleBase>& rules() const noexcept { return rules_; }

  std::size_t template_count() const;
  std::size_t rule_count() const;
  const dsl::RuleDef* find_rule(std::string_view name) const;
  const dsl::TemplateDef* find_template(std::string_view name) const;

 private:
  explicit KnowledgeBase(std::shared_ptr<const engine::RuleBase> rules);

  std::shared_ptr<const engine::RuleBase> rules_;
};

/// Reads, parses and validates rule files. Throws KbError.
KnowledgeBase load_kb(std::span<const std::filesystem::path> paths);

/// Shipped knowledge base: 1 template, 2 rules.
const KnowledgeBase& default_kb();

}  // namespace advisor::kb
