#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace advisor::kb {

/// One student as the rules see it. Field order is the order
/// readtextfiledata reads them.
struct StudentRecord {
  std::int64_t stdid = 0;
  std::string name;
  std::int64_t age = 0;
  double academic_per = 0;
  std::string academic_type;
  std::int64_t hssc_year = 0;
  double int_test_per = 0;
  double eng_per = 0;
  double phy_per = 0;
  double che_per = 0;
  double cs_per = 0;
  double math_per = 0;
  double bio_per = 0;

  friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

/// Slot names of the student template in read order.
inline constexpr std::array<std::string_view, 13> kStudentSlots = {
    "stdid",        "name",          "age",
    "academic-per", "academic-type", "HSSC-year",
    "int-test-per", "ability-test-eng-per", "ability-test-phy-per",
    "ability-test-che-per", "ability-test-cs-per", "ability-test-math-per",
    "ability-test-bio-per"};

/// Test percentages that may appear in recommendation gates.
inline constexpr std::array<std::string_view, 7> kGateFields = {
    "int-test-per",         "ability-test-eng-per", "ability-test-phy-per",
    "ability-test-che-per", "ability-test-cs-per",  "ability-test-math-per",
    "ability-test-bio-per"};

class MalformedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Percentage field by slot name (academic-per or any of kGateFields).
std::optional<double> percent_field(const StudentRecord& r, std::string_view slot);
double* percent_field(StudentRecord& r, std::string_view slot);

/// Rounds to one decimal place.
double normalize_percent(double value);

/// "65" for whole values, otherwise one decimal ("75.5"). Whole values print
/// bare so the engine reads them back as integers.
std::string format_percent(double value);

/// Spaces become underscores; the engine's `read` splits on whitespace.
std::string normalize_name(std::string_view name);

/// Throws MalformedRecord when a field is out of range or would not read back
/// as a single token of the right type.
void validate_record(const StudentRecord& r);

/// The std-data-in.txt line: 13 space-separated tokens and a newline.
std::string serialize_record(const StudentRecord& r);

/// Parses a std-data-in.txt token stream. Throws MalformedRecord.
StudentRecord parse_record(std::string_view text);

}  // namespace advisor::kb
