#include "advisor/kb/report.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace advisor;
using namespace advisor::kb;

namespace {

constexpr std::string_view kBoundary =
    "[STUDENTINFO]\r\nNo=1\r\nname= Ali\r\nAge=19\r\nAcademic Percentage=60\r\n"
    "Academic Type=Science\r\nHSSC-Year=2009\r\n\r\n"
    "[Mathematics]\r\nAccepted=TRUE\r\nRecommended=TRUE\r\n\r\n";

int error_line(std::string_view raw) {
  try {
    parse_report(raw);
  } catch (const ReportFormatError& e) {
    return e.line();
  }
  FAIL("expected ReportFormatError");
  return 0;
}

}  // namespace

TEST_CASE("parse the boundary report") {
  const auto r = parse_report(kBoundary);
  CHECK(r.header == testing::header_of(testing::boundary_student()));
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0] == Verdict{"Mathematics", true, true});
  CHECK(render_report(r) == kBoundary);
}

TEST_CASE("header only report") {
  const auto raw = std::string(kBoundary.substr(0, kBoundary.find("[Mathematics]")));
  const auto r = parse_report(raw);
  CHECK(r.verdicts.empty());
  CHECK(render_report(r) == raw);
}

TEST_CASE("render and parse are inverse on random reports") {
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    AdvisementReport r;
    r.header = testing::header_of(testing::random_record(rng, i));
    const int n = testing::uniform(rng, 0, 4);
    for (int k = 0; k < n; ++k) {
      r.verdicts.push_back({"F" + std::to_string(k), true, rng() % 2 == 0});
    }
    CHECK(parse_report(render_report(r)) == r);
  }
}

TEST_CASE("strict parsing") {
  std::string raw(kBoundary);
  SUBCASE("bare LF") {
    raw.replace(raw.find("\r\nNo="), 2, "\n");
    CHECK(error_line(raw) == 1);
  }
  SUBCASE("missing final blank line") {
    raw.resize(raw.size() - 2);
    CHECK(error_line(raw) == 12);
  }
  SUBCASE("wrong key") {
    raw.replace(raw.find("Age="), 4, "AGE=");
    CHECK(error_line(raw) == 4);
  }
  SUBCASE("bad flag") {
    raw.replace(raw.find("Recommended=TRUE"), 16, "Recommended=YES");
    CHECK(error_line(raw) == 11);
  }
  SUBCASE("non numeric id") {
    raw.replace(raw.find("No=1"), 4, "No=x");
    CHECK(error_line(raw) == 2);
  }
  SUBCASE("truncated") {
    CHECK(error_line(raw.substr(0, 20)) >= 1);
  }
}
