#include "advisor/kb/knowledge_base.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "advisor/dsl/parser.hpp"

namespace advisor::kb {
namespace {

std::string kind_label(KbError::Kind kind) {
  switch (kind) {
    case KbError::Kind::Io: return "IoError";
    case KbError::Kind::Parse: return "ParseError";
    case KbError::Kind::Validation: return "ValidationError";
  }
  return "?";
}

std::string validation_message(const std::vector<dsl::Diagnostic>& diagnostics,
                               const std::map<std::string, std::string>& origin) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += "\n";
    const auto it = origin.find(d.construct);
    if (it != origin.end()) out += it->second + ": ";
    out += dsl::format(d);
  }
  return out;
}

// Parse messages start with "line:column:", so the file name joins them
// directly; validation messages name their file per diagnostic.
std::string location_prefix(KbError::Kind kind, const std::string& file) {
  if (file.empty() || kind == KbError::Kind::Validation) return "";
  return file + (kind == KbError::Kind::Parse ? ":" : ": ");
}

}  // namespace

KbError::KbError(Kind kind, std::string file, int line, const std::string& message,
                 std::vector<dsl::Diagnostic> diagnostics)
    : std::runtime_error(kind_label(kind) + ": " + location_prefix(kind, file) + message),
      kind_(kind),
      file_(std::move(file)),
      line_(line),
      diagnostics_(std::move(diagnostics)) {}

KnowledgeBase::KnowledgeBase(std::shared_ptr<const engine::RuleBase> rules)
    : rules_(std::move(rules)) {}

KnowledgeBase KnowledgeBase::from_sources(std::span<const KbSource> sources) {
  dsl::Program program;
  std::map<std::string, std::string> origin;  // "<kind> <name>" -> file
  for (const auto& src : sources) {
    dsl::Program part;
    try {
      part = dsl::parse_source(src.text);
    } catch (const dsl::LexError& e) {
      throw KbError(KbError::Kind::Parse, src.name, e.line(), e.what());
    } catch (const dsl::ParseError& e) {
      throw KbError(KbError::Kind::Parse, src.name, e.line(), e.what());
    }
    for (auto& c : part) {
      const std::string kind(dsl::construct_kind(c));
      origin.emplace(kind.substr(3) + " " + std::string(dsl::construct_name(c)), src.name);
      program.push_back(std::move(c));
    }
  }
  try {
    return KnowledgeBase(engine::RuleBase::compile(std::move(program)));
  } catch (const engine::ValidationError& e) {
    const auto& diags = e.diagnostics();
    std::string file;
    const auto name = diags.front().construct;
    if (const auto it = origin.find(name); it != origin.end()) file = it->second;
    throw KbError(KbError::Kind::Validation, file, diags.front().loc.line,
                  validation_message(diags, origin), diags);
  }
}

std::size_t KnowledgeBase::template_count() const {
  std::size_t n = 0;
  for (const auto& c : program()) n += std::holds_alternative<dsl::TemplateDef>(c);
  return n;
}

std::size_t KnowledgeBase::rule_count() const { return rules_->rules().size(); }

const dsl::RuleDef* KnowledgeBase::find_rule(std::string_view name) const {
  for (const auto& c : program()) {
    if (const auto* r = std::get_if<dsl::RuleDef>(&c); r && r->name == name) return r;
  }
  return nullptr;
}

const dsl::TemplateDef* KnowledgeBase::find_template(std::string_view name) const {
  for (const auto& c : program()) {
    if (const auto* t = std::get_if<dsl::TemplateDef>(&c); t && t->name == name) return t;
  }
  return nullptr;
}

KnowledgeBase load_kb(std::span<const std::filesystem::path> paths) {
  std::vector<KbSource> sources;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KbError(KbError::Kind::Io, path.string(), 0, "cannot read file");
    std::ostringstream text;
    text << in.rdbuf();
    sources.push_back({path.string(), text.str()});
  }
  return KnowledgeBase::from_sources(sources);
}

const KnowledgeBase& default_kb() {
  static const KnowledgeBase kb = KnowledgeBase::from_sources(shipped_kb_sources());
  return kb;
}

}  // namespace advisor::kb
