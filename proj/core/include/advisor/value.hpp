#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace advisor {

/// Unset template slot.
struct Nil {
  friend bool operator==(const Nil&, const Nil&) = default;
};

/// End of input returned by `read`. It may be bound and printed but never
/// stored in a fact.
struct Eof {
  friend bool operator==(const Eof&, const Eof&) = default;
};

struct Symbol {
  std::string name;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct String {
  std::string text;
  friend bool operator==(const String&, const String&) = default;
};

struct FactAddress {
  std::int64_t id = 0;
  friend bool operator==(const FactAddress&, const FactAddress&) = default;
};

/// Runtime value of the rule language. Booleans are the symbols TRUE and
/// FALSE at the surface.
using Value = std::variant<Nil, Symbol, String, std::int64_t, double, bool,
                           FactAddress, Eof>;

inline bool is_number(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) ||
         std::holds_alternative<double>(v);
}

/// Numeric value as double; caller checks is_number first.
double as_double(const Value& v);

std::string_view type_name(const Value& v);

/// Shortest round-trip text for a double, always carrying a decimal point or
/// exponent so it reads back as a float (60.0 -> "60.0", 75.5 -> "75.5").
std::string format_float(double d);

/// Text written by printout: no quotes around strings, TRUE/FALSE for
/// booleans, `nil`, `EOF`, `<Fact-N>`.
std::string display(const Value& v);

/// Source form that re-lexes to the same value (strings quoted and escaped).
std::string to_source(const Value& v);

}  // namespace advisor
