#include "advisor/kb/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "advisor/dsl/printer.hpp"
#include "advisor/dsl/token.hpp"
#include "advisor/kb/student_record.hpp"

namespace advisor::kb {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_faculty_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

Value number_constant(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return static_cast<std::int64_t>(v);
  return v;
}

dsl::Expression var(std::string name) { return {dsl::VariableRef{std::move(name)}, {}}; }
dsl::Expression constant(Value v) { return {dsl::Constant{std::move(v)}, {}}; }
dsl::Expression sym(std::string name) { return constant(Symbol{std::move(name)}); }
dsl::Expression str(std::string text) { return constant(String{std::move(text)}); }

dsl::Expression call(std::string fn, std::vector<dsl::Expression> args) {
  return {dsl::Call{std::move(fn), std::move(args)}, {}};
}

dsl::Expression at_least(std::string field, double min) {
  return call(">=", {var(std::move(field)), constant(number_constant(min))});
}

dsl::Action printout(std::vector<dsl::Expression> items) {
  return {dsl::PrintoutAction{"fdatao", std::move(items)}, {}};
}

}  // namespace

std::string_view to_string(CriteriaErrc code) {
  switch (code) {
    case CriteriaErrc::Syntax: return "Syntax";
    case CriteriaErrc::MissingKey: return "MissingKey";
    case CriteriaErrc::UnknownGateField: return "UnknownGateField";
    case CriteriaErrc::DuplicateGate: return "DuplicateGate";
    case CriteriaErrc::OutOfRange: return "OutOfRange";
    case CriteriaErrc::InvalidName: return "InvalidName";
  }
  return "?";
}

CriteriaError::CriteriaError(CriteriaErrc code, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         std::string(to_string(code)) + ": " + message),
      code_(code),
      line_(line) {}

void validate_criteria(const FacultyCriteria& c) {
  if (!valid_faculty_name(c.faculty)) {
    throw CriteriaError(CriteriaErrc::InvalidName, 0,
                        "faculty name '" + c.faculty + "' may use letters, digits, '-' and '_'");
  }
  if (!dsl::is_plain_symbol(c.academic_type)) {
    throw CriteriaError(CriteriaErrc::InvalidName, 0,
                        "academic-type '" + c.academic_type + "' must be a symbol");
  }
  if (!(c.min_academic_per >= 0 && c.min_academic_per <= 100)) {
    throw CriteriaError(CriteriaErrc::OutOfRange, 0, "min-academic-per must be within [0, 100]");
  }
  if (c.min_hssc_year < 1950 || c.min_hssc_year > 2100) {
    throw CriteriaError(CriteriaErrc::OutOfRange, 0, "min-hssc-year must be within [1950, 2100]");
  }
  std::set<std::string> seen;
  for (const auto& g : c.gates) {
    if (std::find(kGateFields.begin(), kGateFields.end(), g.field) == kGateFields.end()) {
      throw CriteriaError(CriteriaErrc::UnknownGateField, 0, "unknown gate field '" + g.field + "'");
    }
    if (!seen.insert(g.field).second) {
      throw CriteriaError(CriteriaErrc::DuplicateGate, 0, "gate on " + g.field + " given twice");
    }
    if (!(g.min >= 0 && g.min <= 100)) {
      throw CriteriaError(CriteriaErrc::OutOfRange, 0, "gate " + g.field + " must be within [0, 100]");
    }
  }
}

std::vector<FacultyCriteria> parse_criteria(std::string_view text) {
  struct Section {
    FacultyCriteria criteria;
    int line = 0;
    std::set<std::string> keys;
  };
  std::vector<Section> sections;
  int line_no = 0;
  std::size_t pos = 0;
  auto number = [&](std::string_view key, std::string_view value) {
    const auto v = dsl::classify_atom(value);
    if (value.empty() || !v || !is_number(*v)) {
      throw CriteriaError(CriteriaErrc::Syntax, line_no, std::string(key) + " needs a number");
    }
    return as_double(*v);
  };
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw CriteriaError(CriteriaErrc::Syntax, line_no, "unclosed section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_faculty_name(name)) {
        throw CriteriaError(CriteriaErrc::InvalidName, line_no,
                            "faculty name '" + std::string(name) + "' may use letters, digits, '-' and '_'");
      }
      for (const auto& s : sections) {
        if (s.criteria.faculty == name) {
          throw CriteriaError(CriteriaErrc::Syntax, line_no, "faculty " + std::string(name) + " defined twice");
        }
      }
      sections.push_back({});
      sections.back().criteria.faculty = std::string(name);
      sections.back().line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw CriteriaError(CriteriaErrc::Syntax, line_no, "expected key = value");
    if (sections.empty()) throw CriteriaError(CriteriaErrc::Syntax, line_no, "key outside a [Faculty] section");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto& section = sections.back();
    auto& c = section.criteria;
    if (!section.keys.insert(std::string(key)).second) {
      throw CriteriaError(key.substr(0, 5) == "gate." ? CriteriaErrc::DuplicateGate : CriteriaErrc::Syntax,
                          line_no, "duplicate key " + std::string(key));
    }
    if (key == "min-academic-per") {
      c.min_academic_per = number(key, value);
    } else if (key == "academic-type") {
      c.academic_type = std::string(value);
    } else if (key == "min-hssc-year") {
      const auto v = dsl::classify_atom(value);
      if (value.empty() || !v || !std::holds_alternative<std::int64_t>(*v)) {
        throw CriteriaError(CriteriaErrc::Syntax, line_no, "min-hssc-year needs an integer");
      }
      c.min_hssc_year = std::get<std::int64_t>(*v);
    } else if (key.substr(0, 5) == "gate.") {
      const std::string field(key.substr(5));
      if (std::find(kGateFields.begin(), kGateFields.end(), field) == kGateFields.end()) {
        throw CriteriaError(CriteriaErrc::UnknownGateField, line_no, "unknown gate field '" + field + "'");
      }
      c.gates.push_back({field, number(key, value)});
    } else {
      throw CriteriaError(CriteriaErrc::Syntax, line_no, "unknown key " + std::string(key));
    }
  }
  std::vector<FacultyCriteria> out;
  for (auto& s : sections) {
    for (std::string_view key : {"min-academic-per", "academic-type", "min-hssc-year"}) {
      if (!s.keys.count(std::string(key))) {
        throw CriteriaError(CriteriaErrc::MissingKey, s.line,
                            "[" + s.criteria.faculty + "] is missing " + std::string(key));
      }
    }
    try {
      validate_criteria(s.criteria);
    } catch (const CriteriaError& e) {
      throw CriteriaError(e.code(), s.line, "[" + s.criteria.faculty + "] " + e.what());
    }
    out.push_back(std::move(s.criteria));
  }
  return out;
}

dsl::RuleDef compile_criteria(const FacultyCriteria& c) {
  validate_criteria(c);
  dsl::RuleDef rule;
  rule.name = "fo-" + c.faculty;

  dsl::PatternCE student;
  student.relation = "student";
  auto bind = [&student](std::string slot) {
    for (const auto& s : student.slots) {
      if (s.slot == slot) return;
    }
    student.slots.push_back({slot, dsl::VariableRef{slot}});
  };
  for (std::string slot : {"stdid", "academic-per", "academic-type", "HSSC-year"}) bind(slot);
  for (const auto& g : c.gates) bind(g.field);
  rule.lhs.emplace_back(std::move(student));
  rule.lhs.emplace_back(dsl::TestCE{at_least("academic-per", c.min_academic_per), {}});
  rule.lhs.emplace_back(
      dsl::TestCE{call("eq", {var("academic-type"), sym(c.academic_type)}), {}});
  rule.lhs.emplace_back(
      dsl::TestCE{call(">=", {var("HSSC-year"), constant(c.min_hssc_year)}), {}});

  dsl::FactSpec marker;
  marker.relation = "faculty-of-" + c.faculty;
  marker.fields.push_back(var("stdid"));
  rule.rhs.push_back({dsl::AssertAction{std::move(marker)}, {}});
  rule.rhs.push_back(printout({str("[" + c.faculty + "]"), sym("crlf"), str("Accepted=TRUE"), sym("crlf")}));

  dsl::Expression condition = constant(true);
  if (c.gates.size() == 1) {
    condition = at_least(c.gates[0].field, c.gates[0].min);
  } else if (c.gates.size() > 1) {
    std::vector<dsl::Expression> terms;
    for (const auto& g : c.gates) terms.push_back(at_least(g.field, g.min));
    condition = call("and", std::move(terms));
  }
  dsl::IfAction recommend;
  recommend.condition = std::move(condition);
  recommend.then_branch.push_back(printout({str("Recommended=TRUE"), sym("crlf"), sym("crlf")}));
  recommend.else_branch.push_back(printout({str("Recommended=FALSE"), sym("crlf"), sym("crlf")}));
  rule.rhs.push_back({std::move(recommend), {}});
  return rule;
}

std::string emit_rules(std::span<const FacultyCriteria> criteria) {
  dsl::Program program;
  for (const auto& c : criteria) program.emplace_back(compile_criteria(c));
  return dsl::pretty_print(program);
}

}  // namespace advisor::kb
