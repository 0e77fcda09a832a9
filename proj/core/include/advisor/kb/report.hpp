#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advisor::kb {

struct ReportHeader {
  std::int64_t stdid = 0;
  std::string name;
  std::int64_t age = 0;
  double academic_per = 0;
  std::string academic_type;
  std::int64_t hssc_year = 0;
  friend bool operator==(const ReportHeader&, const ReportHeader&) = default;
};

/// A faculty is listed only when its acceptance gates passed.
struct Verdict {
  std::string faculty;
  bool accepted = true;
  bool recommended = false;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct AdvisementReport {
  ReportHeader header;
  std::vector<Verdict> verdicts;  // firing order
  friend bool operator==(const AdvisementReport&, const AdvisementReport&) = default;
};

class ReportFormatError : public std::runtime_error {
 public:
  ReportFormatError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parses std-data-out.txt. Lines end in CR LF; the header block and every
/// faculty block end with an empty line. Throws ReportFormatError.
AdvisementReport parse_report(std::string_view raw);

/// Inverse of parse_report.
std::string render_report(const AdvisementReport& report);

}  // namespace advisor::kb
