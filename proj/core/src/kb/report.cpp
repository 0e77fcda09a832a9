#include "advisor/kb/report.hpp"

#include <charconv>

#include "advisor/dsl/token.hpp"
#include "advisor/kb/student_record.hpp"

namespace advisor::kb {
namespace {

constexpr std::string_view kCrlf = "\r\n";

class LineReader {
 public:
  explicit LineReader(std::string_view raw) : raw_(raw) {}

  bool done() const { return pos_ >= raw_.size(); }
  int line() const { return line_; }

  std::string_view next() {
    if (done()) throw ReportFormatError(line_ + 1, "unexpected end of report");
    const auto end = raw_.find(kCrlf, pos_);
    if (end == std::string_view::npos) {
      throw ReportFormatError(line_ + 1, "line is not terminated by CR LF");
    }
    const auto text = raw_.substr(pos_, end - pos_);
    pos_ = end + kCrlf.size();
    ++line_;
    if (text.find('\n') != std::string_view::npos || text.find('\r') != std::string_view::npos) {
      throw ReportFormatError(line_, "bare CR or LF inside a line");
    }
    return text;
  }

  std::string_view value(std::string_view key) {
    const auto text = next();
    if (text.substr(0, key.size()) != key) {
      throw ReportFormatError(line_, "expected '" + std::string(key) + "'");
    }
    return text.substr(key.size());
  }

  void blank() {
    if (!next().empty()) throw ReportFormatError(line_, "expected an empty line");
  }

 private:
  std::string_view raw_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

std::int64_t integer(const LineReader& in, std::string_view text) {
  const auto v = dsl::classify_atom(text);
  if (!v || !std::holds_alternative<std::int64_t>(*v)) {
    throw ReportFormatError(in.line(), "expected an integer, got '" + std::string(text) + "'");
  }
  return std::get<std::int64_t>(*v);
}

double number(const LineReader& in, std::string_view text) {
  const auto v = dsl::classify_atom(text);
  if (!v || !is_number(*v)) {
    throw ReportFormatError(in.line(), "expected a number, got '" + std::string(text) + "'");
  }
  return as_double(*v);
}

std::string token(const LineReader& in, std::string_view text) {
  if (text.empty() || text.find(' ') != std::string_view::npos) {
    throw ReportFormatError(in.line(), "expected a single token");
  }
  return std::string(text);
}

bool flag(const LineReader& in, std::string_view text) {
  if (text == "TRUE") return true;
  if (text == "FALSE") return false;
  throw ReportFormatError(in.line(), "expected TRUE or FALSE");
}

}  // namespace

ReportFormatError::ReportFormatError(int line, const std::string& message)
    : std::runtime_error("report line " + std::to_string(line) + ": " + message), line_(line) {}

AdvisementReport parse_report(std::string_view raw) {
  LineReader in(raw);
  AdvisementReport report;
  if (in.next() != "[STUDENTINFO]") throw ReportFormatError(1, "expected [STUDENTINFO]");
  auto& h = report.header;
  h.stdid = integer(in, in.value("No="));
  h.name = token(in, in.value("name= "));
  h.age = integer(in, in.value("Age="));
  h.academic_per = number(in, in.value("Academic Percentage="));
  h.academic_type = token(in, in.value("Academic Type="));
  h.hssc_year = integer(in, in.value("HSSC-Year="));
  in.blank();
  while (!in.done()) {
    const auto title = in.next();
    if (title.size() < 3 || title.front() != '[' || title.back() != ']') {
      throw ReportFormatError(in.line(), "expected [<Faculty>]");
    }
    Verdict v;
    v.faculty = token(in, title.substr(1, title.size() - 2));
    v.accepted = flag(in, in.value("Accepted="));
    if (!v.accepted) throw ReportFormatError(in.line(), "rejected faculties are never listed");
    v.recommended = flag(in, in.value("Recommended="));
    in.blank();
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

std::string render_report(const AdvisementReport& report) {
  const auto& h = report.header;
  std::string out;
  auto line = [&out](std::string_view a, std::string_view b = {}) {
    out += a;
    out += b;
    out += kCrlf;
  };
  line("[STUDENTINFO]");
  line("No=", std::to_string(h.stdid));
  line("name= ", h.name);
  line("Age=", std::to_string(h.age));
  line("Academic Percentage=", format_percent(h.academic_per));
  line("Academic Type=", h.academic_type);
  line("HSSC-Year=", std::to_string(h.hssc_year));
  line("");
  for (const auto& v : report.verdicts) {
    line("[" + v.faculty + "]");
    line("Accepted=", v.accepted ? "TRUE" : "FALSE");
    line("Recommended=", v.recommended ? "TRUE" : "FALSE");
    line("");
  }
  return out;
}

}  // namespace advisor::kb
