#include "advisor/kb/student_record.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "advisor/dsl/token.hpp"

namespace advisor::kb {
namespace {

void check_percent(std::string_view field, double v) {
  if (!std::isfinite(v) || v < 0 || v > 100) {
    throw MalformedRecord(std::string(field) + " must be within [0, 100]");
  }
}

std::vector<std::string> split(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::int64_t integer_token(std::string_view field, const std::string& tok) {
  const auto v = dsl::classify_atom(tok);
  if (!v || !std::holds_alternative<std::int64_t>(*v)) {
    throw MalformedRecord(std::string(field) + " must be an integer, got '" + tok + "'");
  }
  return std::get<std::int64_t>(*v);
}

double number_token(std::string_view field, const std::string& tok) {
  const auto v = dsl::classify_atom(tok);
  if (!v || !is_number(*v)) {
    throw MalformedRecord(std::string(field) + " must be a number, got '" + tok + "'");
  }
  return as_double(*v);
}

template <class Record>
auto field_ptr(Record& r, std::string_view slot) -> decltype(&r.academic_per) {
  if (slot == "academic-per") return &r.academic_per;
  if (slot == "int-test-per") return &r.int_test_per;
  if (slot == "ability-test-eng-per") return &r.eng_per;
  if (slot == "ability-test-phy-per") return &r.phy_per;
  if (slot == "ability-test-che-per") return &r.che_per;
  if (slot == "ability-test-cs-per") return &r.cs_per;
  if (slot == "ability-test-math-per") return &r.math_per;
  if (slot == "ability-test-bio-per") return &r.bio_per;
  return nullptr;
}

}  // namespace

std::optional<double> percent_field(const StudentRecord& r, std::string_view slot) {
  if (const double* p = field_ptr(r, slot)) return *p;
  return std::nullopt;
}

double* percent_field(StudentRecord& r, std::string_view slot) { return field_ptr(r, slot); }

double normalize_percent(double value) { return std::round(value * 10.0) / 10.0; }

std::string format_percent(double value) {
  const double v = normalize_percent(value);
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(v));
  }
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 1);
  return std::string(buf, end);
}

std::string normalize_name(std::string_view name) {
  std::string out;
  bool pending = false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += '_';
    pending = false;
    out += c;
  }
  return out;
}

void validate_record(const StudentRecord& r) {
  if (r.stdid < 0) throw MalformedRecord("stdid must not be negative");
  if (!dsl::is_plain_symbol(r.name)) {
    throw MalformedRecord("name '" + r.name + "' must be a single symbol token");
  }
  if (r.age < 1 || r.age > 150) throw MalformedRecord("age must be within [1, 150]");
  if (!dsl::is_plain_symbol(r.academic_type)) {
    throw MalformedRecord("academic-type '" + r.academic_type + "' must be a single symbol token");
  }
  if (r.hssc_year < 1950 || r.hssc_year > 2100) {
    throw MalformedRecord("HSSC-year must be within [1950, 2100]");
  }
  check_percent("academic-per", r.academic_per);
  for (auto slot : kGateFields) check_percent(slot, *percent_field(r, slot));
}

std::string serialize_record(const StudentRecord& r) {
  validate_record(r);
  std::string out;
  auto add = [&out](const std::string& tok) {
    if (!out.empty()) out += ' ';
    out += tok;
  };
  add(std::to_string(r.stdid));
  add(r.name);
  add(std::to_string(r.age));
  add(format_percent(r.academic_per));
  add(r.academic_type);
  add(std::to_string(r.hssc_year));
  for (auto slot : kGateFields) {
    // read order: int eng phy che cs math bio
    add(format_percent(*percent_field(r, slot)));
  }
  return out + "\n";
}

StudentRecord parse_record(std::string_view text) {
  const auto tokens = split(text);
  if (tokens.size() != kStudentSlots.size()) {
    throw MalformedRecord("expected " + std::to_string(kStudentSlots.size()) + " tokens, got " +
                          std::to_string(tokens.size()));
  }
  StudentRecord r;
  r.stdid = integer_token("stdid", tokens[0]);
  r.name = tokens[1];
  r.age = integer_token("age", tokens[2]);
  r.academic_per = number_token("academic-per", tokens[3]);
  r.academic_type = tokens[4];
  r.hssc_year = integer_token("HSSC-year", tokens[5]);
  for (std::size_t i = 0; i < kGateFields.size(); ++i) {
    *percent_field(r, kGateFields[i]) = number_token(kGateFields[i], tokens[6 + i]);
  }
  validate_record(r);
  return r;
}

}  // namespace advisor::kb
