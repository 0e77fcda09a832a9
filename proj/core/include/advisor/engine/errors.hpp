#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advisor::engine {

enum class EngineErrc {
  UnknownTemplate,
  UnknownSlot,
  FactShapeMismatch,
  UnknownFact,
  TypeMismatch,
  UnboundVariable,
  RouterNotOpen,
  RouterAlreadyOpen,
  OpenFailed,
  DivisionByZero,
  IntegerOverflow,
  InvalidNumber,
  EofInFact,
  InvalidProgram,
};

std::string_view to_string(EngineErrc code);

class EngineError : public std::runtime_error {
 public:
  EngineError(EngineErrc code, const std::string& message);

  EngineErrc code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  EngineErrc code_;
  std::string detail_;
};

}  // namespace advisor::engine
