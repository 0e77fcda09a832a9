#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>
#include <sstream>

#include "advisor/assessment/question_bank.hpp"
#include "advisor/assessment/session.hpp"
#include "doctest.h"

using namespace advisor;
using namespace advisor::assessment;
using namespace std::chrono_literals;

namespace fs = std::filesystem;

namespace {

const QuestionBank& fixture_bank() {
  static const QuestionBank bank = load_bank(fs::path(ADVISOR_TEST_DATA_DIR) / "bank-minimal.txt");
  return bank;
}

const Instant kT0{std::chrono::milliseconds{1'700'000'000'000}};

Background ali() { return {1, "Ali", 19, 60, "Science", 2009}; }

SessionState fresh(ScienceGroup g = ScienceGroup::ComputerScience, std::uint64_t seed = 42) {
  return start_session("s1", ali(), g, fixture_bank(), TestPlan{}, seed, kT0);
}

int correct_of(std::string_view id) { return fixture_bank().find(id)->correct_index; }
int wrong_of(std::string_view id) { return correct_of(id) == 0 ? 1 : 0; }

/// Answers every question of the current phase; `right(i)` picks correctness.
template <class F>
void answer_phase(SessionState& s, Instant at, F right) {
  const auto ids = phase_questions(s);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int choice = right(i) ? correct_of(ids[i]) : wrong_of(ids[i]);
    REQUIRE(submit_answer(s, ids[i], choice, at, fixture_bank(), TestPlan{}) == SubmitStatus::Recorded);
  }
}

std::string bank_with(std::size_t physics) {
  std::ostringstream out;
  int n = 0;
  for (auto s : {Subject::English, Subject::Mathematics, Subject::Physics, Subject::Chemistry,
                 Subject::ComputerScience, Subject::Biology, Subject::Intelligence}) {
    const std::size_t count = s == Subject::Intelligence ? 50 : s == Subject::Physics ? physics : 20;
    for (std::size_t i = 0; i < count; ++i) out << "q" << ++n << '|' << to_string(s) << "|p|a;b|0\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("fixture bank loads") {
  const auto& bank = fixture_bank();
  CHECK(bank.count(Subject::Physics) == 20);
  CHECK(bank.count(Subject::Intelligence) == 50);
  CHECK(bank.questions().size() == 170);
}

TEST_CASE("bank minimums") {
  CHECK_NOTHROW(QuestionBank::parse(bank_with(20)));
  try {
    QuestionBank::parse(bank_with(19));
    FAIL("expected InsufficientQuestions");
  } catch (const InsufficientQuestions& e) {
    CHECK(e.subject() == Subject::Physics);
    CHECK(e.have() == 19);
    CHECK(e.need() == 20);
    CHECK(std::string(e.what()) == "InsufficientQuestions(Physics, 19, 20)");
  }
}

TEST_CASE("bank parse errors") {
  const BankMinimums none{0, 0};
  auto line_of = [&](std::string_view text) {
    try {
      QuestionBank::parse(text, none);
    } catch (const BankParseError& e) {
      return e.line();
    }
    FAIL("expected BankParseError");
    return 0;
  };
  CHECK(line_of("a|English|p|x;y|0\na|English|p|x;y|1\n") == 2);
  CHECK(line_of("# c\na|Geography|p|x;y|0\n") == 2);
  CHECK(line_of("a|English|p|x|0\n") == 1);
  CHECK(line_of("a|English|p|x;y|2\n") == 1);
  CHECK(line_of("a|English|p|x;y\n") == 1);
  CHECK(line_of("a b|English|p|x;y|0\n") == 1);
  CHECK_THROWS_AS(load_bank("/nonexistent/bank.txt"), BankParseError);
}

TEST_CASE("draw follows the group") {
  for (auto g : {ScienceGroup::ComputerScience, ScienceGroup::Biology}) {
    const auto s = fresh(g);
    REQUIRE(s.ability_questions.size() == 100);
    CHECK(s.intelligence_questions.size() == 50);
    const auto subjects = ability_subjects(g);
    for (std::size_t i = 0; i < 100; ++i) {
      CHECK(fixture_bank().find(s.ability_questions[i])->subject == subjects[i / 20]);
    }
    const Subject excluded = g == ScienceGroup::ComputerScience ? Subject::Biology : Subject::ComputerScience;
    for (const auto& id : s.ability_questions) CHECK(fixture_bank().find(id)->subject != excluded);
    std::set<std::string> unique(s.ability_questions.begin(), s.ability_questions.end());
    unique.insert(s.intelligence_questions.begin(), s.intelligence_questions.end());
    CHECK(unique.size() == 150);
  }
}

TEST_CASE("draw is deterministic per seed") {
  const QuestionBank big = load_bank(fs::path(ADVISOR_SOURCE_DIR) / "data/sample-bank.txt");
  auto a = start_session("a", ali(), ScienceGroup::Biology, big, {}, 7, kT0);
  auto b = start_session("b", ali(), ScienceGroup::Biology, big, {}, 7, kT0);
  auto c = start_session("c", ali(), ScienceGroup::Biology, big, {}, 8, kT0);
  CHECK(a.ability_questions == b.ability_questions);
  CHECK(a.intelligence_questions == b.intelligence_questions);
  CHECK(a.ability_questions != c.ability_questions);
}

TEST_CASE("background validation") {
  auto b = ali();
  b.academic_per = 105;
  CHECK_THROWS_AS(start_session("x", b, ScienceGroup::Biology, fixture_bank(), {}, 1, kT0), InvalidBackground);
  b = ali();
  b.hssc_year = 1900;
  CHECK_THROWS_AS(validate_background(b), InvalidBackground);
  b = ali();
  b.name = "";
  CHECK_THROWS_AS(validate_background(b), InvalidBackground);
  b = ali();
  b.name = "Ali  Khan";
  CHECK(start_session("x", b, ScienceGroup::Biology, fixture_bank(), {}, 1, kT0).background.name == "Ali_Khan");
}

TEST_CASE("phases and deadlines") {
  auto s = fresh();
  CHECK(s.phase == Phase::Ability);
  CHECK(s.deadline == kT0 + 3600s);
  CHECK(phase_questions(s).size() == 100);

  SUBCASE("finishing early starts intelligence at once") {
    answer_phase(s, kT0 + 10min, [](std::size_t) { return true; });
    CHECK(s.phase == Phase::Intelligence);
    CHECK(s.cursor == 0);
    CHECK(s.deadline == kT0 + 10min + 1800s);
  }
  SUBCASE("expiry starts intelligence at the ability deadline") {
    advance_clock(s, kT0 + 3600s, {});
    CHECK(s.phase == Phase::Ability);
    advance_clock(s, kT0 + 2h, {});
    CHECK(s.phase == Phase::Intelligence);
    CHECK(s.deadline == kT0 + 3600s + 1800s);
  }
  SUBCASE("late ability answer is dropped") {
    const auto id = s.ability_questions[0];
    CHECK(submit_answer(s, id, 0, kT0 + 3601s, fixture_bank(), {}) == SubmitStatus::DeadlineExpired);
    CHECK(s.answers.empty());
    CHECK(s.phase == Phase::Intelligence);
    CHECK_THROWS_AS(submit_answer(s, id, 0, kT0 + 3602s, fixture_bank(), {}), WrongPhase);
  }
  SUBCASE("answer at the deadline counts") {
    CHECK(submit_answer(s, s.ability_questions[3], 1, kT0 + 3600s, fixture_bank(), {}) == SubmitStatus::Recorded);
  }
  SUBCASE("intelligence question during ability") {
    CHECK_THROWS_AS(submit_answer(s, s.intelligence_questions[0], 0, kT0, fixture_bank(), {}), WrongPhase);
  }
  SUBCASE("unknown question and bad choice") {
    CHECK_THROWS_AS(submit_answer(s, "nope", 0, kT0, fixture_bank(), {}), UnknownQuestion);
    CHECK_THROWS_AS(submit_answer(s, s.ability_questions[0], 9, kT0, fixture_bank(), {}), InvalidChoice);
    CHECK_THROWS_AS(submit_answer(s, s.ability_questions[0], -1, kT0, fixture_bank(), {}), InvalidChoice);
  }
  SUBCASE("finalize too early") {
    CHECK_THROWS_AS(finalize(s, kT0, fixture_bank(), {}), PhaseIncomplete);
    advance_clock(s, kT0 + 3601s, {});
    CHECK_THROWS_AS(finalize(s, kT0 + 3601s, fixture_bank(), {}), PhaseIncomplete);
    CHECK_NOTHROW(finalize(s, kT0 + 5401s, fixture_bank(), {}));
  }
}

TEST_CASE("cursor and overwrite") {
  auto s = fresh();
  const auto ids = s.ability_questions;
  submit_answer(s, ids[1], correct_of(ids[1]), kT0, fixture_bank(), {});
  CHECK(s.cursor == 0);
  submit_answer(s, ids[0], wrong_of(ids[0]), kT0, fixture_bank(), {});
  CHECK(s.cursor == 2);
  submit_answer(s, ids[0], correct_of(ids[0]), kT0 + 1s, fixture_bank(), {});
  CHECK(s.answers.at(ids[0]) == correct_of(ids[0]));
  CHECK(s.answers.size() == 2);
}

TEST_CASE("scoring examples") {
  auto s = fresh(ScienceGroup::ComputerScience);
  // English: 13 of 20 right; everything else in ability right.
  const auto subjects = ability_subjects(ScienceGroup::ComputerScience);
  answer_phase(s, kT0 + 1min, [&](std::size_t i) { return i >= 20 || i < 13; });
  answer_phase(s, kT0 + 2min, [](std::size_t) { return false; });
  CHECK(phase_ended(s, kT0 + 2min));
  const auto result = finalize(s, kT0 + 2min, fixture_bank(), {});
  CHECK(s.phase == Phase::Finalized);
  CHECK(result.sheet[Subject::English] == doctest::Approx(65));
  CHECK(result.sheet[Subject::Intelligence] == 0);
  CHECK(result.sheet[Subject::ComputerScience] == 100);
  CHECK(result.sheet[Subject::Biology] == 0);
  CHECK(result.record.eng_per == 65);
  CHECK(result.record.cs_per == 100);
  CHECK(result.record.bio_per == 0);
  CHECK(result.record.int_test_per == 0);
  CHECK(result.record.name == "Ali");
  CHECK(subjects[0] == Subject::English);
  // Finalize again returns the same result.
  const auto again = finalize(s, kT0 + 3min, fixture_bank(), {});
  CHECK(again.sheet == result.sheet);
}

TEST_CASE("unanswered questions score zero") {
  auto s = fresh(ScienceGroup::Biology);
  const auto result = finalize(s, kT0 + 2h, fixture_bank(), {});
  for (double p : result.sheet.percent) CHECK(p == 0);
}

TEST_CASE("fractional scores round to one decimal in the record") {
  TestPlan plan;
  plan.intelligence_count = 3;
  auto s = start_session("f", ali(), ScienceGroup::Biology, fixture_bank(), plan, 9, kT0);
  for (const auto& id : s.ability_questions) submit_answer(s, id, correct_of(id), kT0, fixture_bank(), plan);
  REQUIRE(s.phase == Phase::Intelligence);
  submit_answer(s, s.intelligence_questions[0], correct_of(s.intelligence_questions[0]), kT0, fixture_bank(), plan);
  submit_answer(s, s.intelligence_questions[1], correct_of(s.intelligence_questions[1]), kT0, fixture_bank(), plan);
  submit_answer(s, s.intelligence_questions[2], wrong_of(s.intelligence_questions[2]), kT0, fixture_bank(), plan);
  const auto result = finalize(s, kT0, fixture_bank(), plan);
  CHECK(result.sheet[Subject::Intelligence] == doctest::Approx(200.0 / 3));
  CHECK(result.record.int_test_per == doctest::Approx(66.7));
}

TEST_CASE("names and parsers") {
  CHECK(parse_science_group("CS") == ScienceGroup::ComputerScience);
  CHECK(parse_science_group("ComputerScience") == ScienceGroup::ComputerScience);
  CHECK(parse_science_group("Biology") == ScienceGroup::Biology);
  CHECK_FALSE(parse_science_group("Arts"));
  CHECK(parse_phase("intelligence") == Phase::Intelligence);
  CHECK(parse_subject("ComputerScience") == Subject::ComputerScience);
  CHECK(to_string(Subject::Intelligence) == "Intelligence");
}
