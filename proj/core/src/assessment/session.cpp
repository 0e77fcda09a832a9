#include "advisor/assessment/session.hpp"

#include <algorithm>
#include <random>

namespace advisor::assessment {
namespace {

// Fisher-Yates with rejection sampling; std::shuffle is not portable across
// standard libraries.
void shuffle(std::vector<const Question*>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(v[i - 1], v[r % bound]);
  }
}

std::vector<std::string> draw(const QuestionBank& bank, Subject s, std::size_t n, std::mt19937_64& rng) {
  auto pool = bank.by_subject(s);
  if (pool.size() < n) throw InsufficientQuestions(s, pool.size(), n);
  shuffle(pool, rng);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[i]->id);
  return out;
}

void refresh_cursor(SessionState& s) {
  const auto& qs = phase_questions(s);
  while (s.cursor < qs.size() && s.answers.count(qs[s.cursor])) ++s.cursor;
}

void begin_intelligence(SessionState& s, Instant ability_end, const TestPlan& plan) {
  s.phase = Phase::Intelligence;
  s.cursor = 0;
  s.deadline = ability_end + std::chrono::duration_cast<std::chrono::milliseconds>(plan.intelligence_duration);
  refresh_cursor(s);
}

bool contains(const std::vector<std::string>& v, std::string_view id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

}  // namespace

std::string_view to_string(ScienceGroup g) {
  return g == ScienceGroup::ComputerScience ? "CS" : "Biology";
}

std::optional<ScienceGroup> parse_science_group(std::string_view text) {
  if (text == "CS" || text == "ComputerScience") return ScienceGroup::ComputerScience;
  if (text == "Biology") return ScienceGroup::Biology;
  return std::nullopt;
}

std::array<Subject, 5> ability_subjects(ScienceGroup g) {
  return {Subject::English, Subject::Mathematics, Subject::Physics, Subject::Chemistry,
          g == ScienceGroup::ComputerScience ? Subject::ComputerScience : Subject::Biology};
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Background: return "background";
    case Phase::Ability: return "ability";
    case Phase::Intelligence: return "intelligence";
    case Phase::Finalized: return "finalized";
  }
  return "?";
}

std::optional<Phase> parse_phase(std::string_view text) {
  for (auto p : {Phase::Background, Phase::Ability, Phase::Intelligence, Phase::Finalized}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

const std::vector<std::string>& phase_questions(const SessionState& s) {
  static const std::vector<std::string> none;
  switch (s.phase) {
    case Phase::Ability: return s.ability_questions;
    case Phase::Intelligence: return s.intelligence_questions;
    default: return none;
  }
}

bool phase_ended(const SessionState& s, Instant now) {
  return s.cursor >= phase_questions(s).size() || now > s.deadline;
}

void validate_background(const Background& b) {
  kb::StudentRecord r;
  r.stdid = b.stdid;
  r.name = kb::normalize_name(b.name);
  r.age = b.age;
  r.academic_per = b.academic_per;
  r.academic_type = b.academic_type;
  r.hssc_year = b.hssc_year;
  try {
    kb::validate_record(r);
  } catch (const kb::MalformedRecord& e) {
    throw InvalidBackground(e.what());
  }
}

SessionState start_session(std::string id, const Background& background, ScienceGroup group,
                           const QuestionBank& bank, const TestPlan& plan, std::uint64_t seed,
                           Instant now) {
  validate_background(background);
  SessionState s;
  s.id = std::move(id);
  s.background = background;
  s.background.name = kb::normalize_name(background.name);
  s.group = group;
  std::mt19937_64 rng(seed);
  for (auto subject : ability_subjects(group)) {
    auto block = draw(bank, subject, plan.per_subject, rng);
    s.ability_questions.insert(s.ability_questions.end(), block.begin(), block.end());
  }
  s.intelligence_questions = draw(bank, Subject::Intelligence, plan.intelligence_count, rng);
  s.phase = Phase::Ability;
  s.started_at = now;
  s.deadline = now + std::chrono::duration_cast<std::chrono::milliseconds>(plan.ability_duration);
  return s;
}

void advance_clock(SessionState& s, Instant now, const TestPlan& plan) {
  if (s.phase == Phase::Ability && now > s.deadline) begin_intelligence(s, s.deadline, plan);
}

SubmitStatus submit_answer(SessionState& s, std::string_view question_id, int choice, Instant at,
                           const QuestionBank& bank, const TestPlan& plan) {
  const auto before = s.phase;
  advance_clock(s, at, plan);
  if (s.phase == Phase::Finalized) throw WrongPhase("session is finalized");
  if (s.phase == Phase::Background) throw WrongPhase("tests have not started");

  const auto& current = phase_questions(s);
  if (!contains(current, question_id)) {
    if (before == Phase::Ability && s.phase == Phase::Intelligence && contains(s.ability_questions, question_id)) {
      return SubmitStatus::DeadlineExpired;
    }
    if (contains(s.ability_questions, question_id) || contains(s.intelligence_questions, question_id)) {
      throw WrongPhase("question " + std::string(question_id) + " is not in the " +
                       std::string(to_string(s.phase)) + " phase");
    }
    throw UnknownQuestion("unknown question " + std::string(question_id));
  }
  if (at > s.deadline) return SubmitStatus::DeadlineExpired;

  const Question* q = bank.find(question_id);
  if (!q) throw UnknownQuestion("question " + std::string(question_id) + " is missing from the bank");
  if (choice < 0 || static_cast<std::size_t>(choice) >= q->choices.size()) {
    throw InvalidChoice("choice " + std::to_string(choice) + " out of range for " + q->id);
  }
  s.answers[q->id] = choice;
  refresh_cursor(s);
  if (s.phase == Phase::Ability && s.cursor >= s.ability_questions.size()) begin_intelligence(s, at, plan);
  return SubmitStatus::Recorded;
}

ScoreSheet score(const SessionState& s, const QuestionBank& bank) {
  std::array<std::size_t, kSubjectCount> drawn{};
  std::array<std::size_t, kSubjectCount> correct{};
  auto tally = [&](const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
      const Question* q = bank.find(id);
      if (!q) throw UnknownQuestion("question " + id + " is missing from the bank");
      const auto i = static_cast<std::size_t>(q->subject);
      ++drawn[i];
      const auto a = s.answers.find(id);
      if (a != s.answers.end() && a->second == q->correct_index) ++correct[i];
    }
  };
  tally(s.ability_questions);
  tally(s.intelligence_questions);
  ScoreSheet sheet;
  for (std::size_t i = 0; i < kSubjectCount; ++i) {
    sheet.percent[i] = drawn[i] ? 100.0 * static_cast<double>(correct[i]) / static_cast<double>(drawn[i]) : 0.0;
  }
  return sheet;
}

kb::StudentRecord build_record(const Background& b, const ScoreSheet& sheet) {
  kb::StudentRecord r;
  r.stdid = b.stdid;
  r.name = kb::normalize_name(b.name);
  r.age = b.age;
  r.academic_per = kb::normalize_percent(b.academic_per);
  r.academic_type = b.academic_type;
  r.hssc_year = b.hssc_year;
  r.int_test_per = kb::normalize_percent(sheet[Subject::Intelligence]);
  r.eng_per = kb::normalize_percent(sheet[Subject::English]);
  r.phy_per = kb::normalize_percent(sheet[Subject::Physics]);
  r.che_per = kb::normalize_percent(sheet[Subject::Chemistry]);
  r.cs_per = kb::normalize_percent(sheet[Subject::ComputerScience]);
  r.math_per = kb::normalize_percent(sheet[Subject::Mathematics]);
  r.bio_per = kb::normalize_percent(sheet[Subject::Biology]);
  return r;
}

FinalResult finalize(SessionState& s, Instant at, const QuestionBank& bank, const TestPlan& plan) {
  advance_clock(s, at, plan);
  if (s.phase == Phase::Ability || s.phase == Phase::Background) {
    throw PhaseIncomplete("the ability test is still running");
  }
  if (s.phase == Phase::Intelligence && !phase_ended(s, at)) {
    throw PhaseIncomplete("the intelligence test is still running");
  }
  FinalResult out;
  out.sheet = score(s, bank);
  out.record = build_record(s.background, out.sheet);
  s.phase = Phase::Finalized;
  s.cursor = 0;
  return out;
}

}  // namespace advisor::assessment
