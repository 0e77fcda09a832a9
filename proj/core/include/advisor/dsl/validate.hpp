#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "advisor/dsl/ast.hpp"

namespace advisor::dsl {

enum class DiagnosticCode {
  UndefinedTemplate,
  UnknownSlot,
  DuplicateSlot,
  EmptyTemplate,
  DuplicateConstruct,
  FactFormMismatch,  // positional fields on a template, or slots on an ordered fact
  UnboundVariable,
  NotAFactVariable,
  RebindFactVariable,
  SalienceOutOfRange,
  UnknownFunction,
  BadArity,
  NonBooleanTest,
  InvalidRouter,
  InvalidOpenMode,
};

std::string_view to_string(DiagnosticCode code);

struct Diagnostic {
  DiagnosticCode code;
  std::string construct;  // name of the construct the problem is in
  std::string subject;    // template, slot, variable or function concerned
  std::string message;
  SourceLoc loc;
};

/// "rule fo-Mathematics 12:4: UndefinedTemplate student: ..."
std::string format(const Diagnostic& d);

/// Static checks over a whole program. Empty result means every pattern and
/// fact refers to a defined template with valid slots (or is an ordered
/// fact), every variable is bound before use, and every call is well formed.
/// Router names are checked at run time, not here.
std::vector<Diagnostic> validate(const Program& program);

}  // namespace advisor::dsl
