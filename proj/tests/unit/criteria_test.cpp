#include <algorithm>
#include <filesystem>
#include <fstream>

#include "advisor/dsl/parser.hpp"
#include "advisor/kb/advise.hpp"
#include "advisor/kb/criteria.hpp"
#include "advisor/kb/knowledge_base.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace advisor;
using namespace advisor::kb;

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CriteriaErrc error_of(std::string_view text) {
  try {
    for (const auto& c : parse_criteria(text)) validate_criteria(c);
  } catch (const CriteriaError& e) {
    return e.code();
  }
  FAIL("expected CriteriaError");
  return CriteriaErrc::Syntax;
}

constexpr std::string_view kHead =
    "[F]\nmin-academic-per = 60\nacademic-type = Science\nmin-hssc-year = 2009\n";

KnowledgeBase shipped_with(const std::string& extra_rules) {
  std::vector<KbSource> sources;
  for (const auto& s : shipped_kb_sources())
    if (s.name != "fo-mathematics.clp") sources.push_back(s);
  sources.push_back({"compiled.clp", extra_rules});
  return KnowledgeBase::from_sources(sources);
}

}  // namespace

TEST_CASE("mathematics.ini parses to the shipped thresholds") {
  const auto parsed = parse_criteria(read_file(fs::path(ADVISOR_SOURCE_DIR) / "criteria/mathematics.ini"));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == testing::mathematics_criteria());
}

TEST_CASE("compiled rule equals the shipped rule") {
  const auto compiled = compile_criteria(testing::mathematics_criteria());
  const auto* shipped = default_kb().find_rule("fo-Mathematics");
  REQUIRE(shipped);
  CHECK(compiled == *shipped);
}

TEST_CASE("emitted text parses back to the same rules") {
  const auto all = parse_criteria(read_file(fs::path(ADVISOR_SOURCE_DIR) / "criteria/sample-faculties.ini"));
  REQUIRE(all.size() == 4);
  const auto program = dsl::parse_source(emit_rules(all));
  REQUIRE(program.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(std::get<dsl::RuleDef>(program[i]) == compile_criteria(all[i]));
  }
}

TEST_CASE("compiled faculties agree with the reference evaluator") {
  const auto all = parse_criteria(read_file(fs::path(ADVISOR_SOURCE_DIR) / "criteria/sample-faculties.ini"));
  const auto kb = shipped_with(emit_rules(all));
  testing::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    auto r = testing::random_record(rng, i + 1);
    if (i % 7 == 0) r.academic_type = "Arts";
    const auto got = evaluate_student(r, kb).report.verdicts;
    auto want = testing::oracle_verdicts(r, all);
    // Equal-salience faculties fire in recency order; compare by name.
    auto key = [](const Verdict& v) { return v.faculty; };
    auto sorted = [&](std::vector<Verdict> v) {
      std::sort(v.begin(), v.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
      return v;
    };
    CHECK(sorted(got) == sorted(want));
  }
}

TEST_CASE("gates and thresholds are inclusive") {
  auto c = testing::mathematics_criteria();
  c.faculty = "Probe";
  c.gates = {{"ability-test-phy-per", 70.5}};
  const auto kb = shipped_with(emit_rules(std::vector{c}));
  auto r = testing::boundary_student();
  r.phy_per = 70.5;
  auto v = evaluate_student(r, kb).report.verdicts;
  REQUIRE(v.size() == 1);
  CHECK(v[0].recommended);
  r.phy_per = 70.4;
  v = evaluate_student(r, kb).report.verdicts;
  REQUIRE(v.size() == 1);
  CHECK_FALSE(v[0].recommended);
  r.academic_per = 59.9;
  CHECK(evaluate_student(r, kb).report.verdicts.empty());
}

TEST_CASE("a faculty without gates is always recommended once accepted") {
  FacultyCriteria c{"Open", 50, "Arts", 2000, {}};
  const auto kb = shipped_with(emit_rules(std::vector{c}));
  auto r = testing::boundary_student();
  r.academic_type = "Arts";
  r.int_test_per = 0;
  const auto v = evaluate_student(r, kb).report.verdicts;
  REQUIRE(v.size() == 1);
  CHECK(v[0] == Verdict{"Open", true, true});
}

TEST_CASE("criteria errors") {
  const std::string head(kHead);
  CHECK(error_of("min-academic-per = 60\n") == CriteriaErrc::Syntax);
  CHECK(error_of("[F]\nnonsense\n") == CriteriaErrc::Syntax);
  CHECK(error_of("[F]\nmin-academic-per = 60\n") == CriteriaErrc::MissingKey);
  CHECK(error_of(head + "gate.ability-test-art-per = 50\n") == CriteriaErrc::UnknownGateField);
  CHECK(error_of(head + "gate.academic-per = 50\n") == CriteriaErrc::UnknownGateField);
  CHECK(error_of(head + "gate.int-test-per = 50\ngate.int-test-per = 60\n") ==
        CriteriaErrc::DuplicateGate);
  CHECK(error_of(head + "gate.int-test-per = 150\n") == CriteriaErrc::OutOfRange);
  CHECK(error_of("[F]\nmin-academic-per = -1\nacademic-type = Science\nmin-hssc-year = 2009\n") ==
        CriteriaErrc::OutOfRange);
  CHECK(error_of("[Bad Name]\nmin-academic-per = 1\nacademic-type = Science\nmin-hssc-year = 2009\n") ==
        CriteriaErrc::InvalidName);
  CHECK(error_of("[F]\nmin-academic-per = 60\nacademic-type = \"x y\"\nmin-hssc-year = 2009\n") ==
        CriteriaErrc::InvalidName);
}

TEST_CASE("missing key points at the section") {
  try {
    parse_criteria("# c\n\n[F]\nmin-academic-per = 60\n");
    FAIL("expected CriteriaError");
  } catch (const CriteriaError& e) {
    CHECK(e.code() == CriteriaErrc::MissingKey);
    CHECK(e.line() == 3);
  }
}

TEST_CASE("empty criteria yield no rules") {
  CHECK(parse_criteria("").empty());
  CHECK(parse_criteria("# only a comment\n\n").empty());
  CHECK(emit_rules({}).empty());
}
