#include "advisor/value.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace advisor {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

std::string_view type_name(const Value& v) {
  return std::visit(Overloaded{
                        [](const Nil&) { return std::string_view("nil"); },
                        [](const Symbol&) { return std::string_view("symbol"); },
                        [](const String&) { return std::string_view("string"); },
                        [](std::int64_t) { return std::string_view("integer"); },
                        [](double) { return std::string_view("float"); },
                        [](bool) { return std::string_view("boolean"); },
                        [](const FactAddress&) { return std::string_view("fact-address"); },
                        [](const Eof&) { return std::string_view("EOF"); },
                    },
                    v);
}

std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string out(buf, end);
  const auto exp = out.find_first_of("eE");
  if (out.find('.') == std::string::npos) {
    if (exp == std::string::npos) {
      out += ".0";
    } else {
      out.insert(exp, ".0");
    }
  }
  return out;
}

std::string display(const Value& v) {
  return std::visit(Overloaded{
                        [](const Nil&) { return std::string("nil"); },
                        [](const Symbol& s) { return s.name; },
                        [](const String& s) { return s.text; },
                        [](std::int64_t i) { return std::to_string(i); },
                        [](double d) { return format_float(d); },
                        [](bool b) { return std::string(b ? "TRUE" : "FALSE"); },
                        [](const FactAddress& f) {
                          return "<Fact-" + std::to_string(f.id) + ">";
                        },
                        [](const Eof&) { return std::string("EOF"); },
                    },
                    v);
}

std::string to_source(const Value& v) {
  if (const auto* s = std::get_if<String>(&v)) {
    std::string out = "\"";
    for (char c : s->text) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
    return out;
  }
  return display(v);
}

}  // namespace advisor
