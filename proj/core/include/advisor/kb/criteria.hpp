#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "advisor/dsl/ast.hpp"

namespace advisor::kb {

struct Gate {
  std::string field;  // one of kGateFields
  double min = 0;
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Admission rule for one faculty. Acceptance needs all of academic-per >=
/// min_academic_per, academic-type == academic_type and HSSC-year >=
/// min_hssc_year; recommendation additionally needs every gate.
struct FacultyCriteria {
  std::string faculty;
  double min_academic_per = 0;
  std::string academic_type;
  std::int64_t min_hssc_year = 0;
  std::vector<Gate> gates;
  friend bool operator==(const FacultyCriteria&, const FacultyCriteria&) = default;
};

enum class CriteriaErrc { Syntax, MissingKey, UnknownGateField, DuplicateGate, OutOfRange, InvalidName };

std::string_view to_string(CriteriaErrc code);

class CriteriaError : public std::runtime_error {
 public:
  CriteriaError(CriteriaErrc code, int line, const std::string& message);
  CriteriaErrc code() const noexcept { return code_; }
  int line() const noexcept { return line_; }

 private:
  CriteriaErrc code_;
  int line_;
};

/// INI-style criteria:
///
///   [Mathematics]
///   min-academic-per = 60
///   academic-type = Science
///   min-hssc-year = 2009
///   gate.int-test-per = 80
///
/// Gate order is file order. Throws CriteriaError.
std::vector<FacultyCriteria> parse_criteria(std::string_view text);

void validate_criteria(const FacultyCriteria& criteria);

/// Builds the rule `fo-<faculty>`: one student pattern binding stdid, the
/// acceptance fields and every gate field; three acceptance tests; then
/// assert, the section printout, and an `if` over the gate conjunction
/// (TRUE when there are no gates).
dsl::RuleDef compile_criteria(const FacultyCriteria& criteria);

/// Pretty-printed rules for every criteria entry, ready to load next to the
/// shipped knowledge base.
std::string emit_rules(std::span<const FacultyCriteria> criteria);

}  // namespace advisor::kb
