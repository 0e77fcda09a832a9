#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "advisor/assessment/question_bank.hpp"
#include "advisor/kb/student_record.hpp"

namespace advisor::assessment {

using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

enum class ScienceGroup { ComputerScience, Biology };

std::string_view to_string(ScienceGroup g);
/// Accepts "CS", "ComputerScience" and "Biology".
std::optional<ScienceGroup> parse_science_group(std::string_view text);

struct TestPlan {
  std::size_t per_subject = 20;
  std::size_t intelligence_count = 50;
  std::chrono::seconds ability_duration{3600};
  std::chrono::seconds intelligence_duration{1800};
};

/// Ability subjects for a group, in delivery order.
std::array<Subject, 5> ability_subjects(ScienceGroup g);

/// Identity and academics captured before the tests.
struct Background {
  std::int64_t stdid = 0;
  std::string name;
  std::int64_t age = 0;
  double academic_per = 0;
  std::string academic_type;
  std::int64_t hssc_year = 0;
  friend bool operator==(const Background&, const Background&) = default;
};

enum class Phase { Background, Ability, Intelligence, Finalized };

std::string_view to_string(Phase p);
std::optional<Phase> parse_phase(std::string_view text);

struct SessionState {
  std::string id;
  Background background;
  ScienceGroup group = ScienceGroup::ComputerScience;
  Phase phase = Phase::Background;
  std::vector<std::string> ability_questions;
  std::vector<std::string> intelligence_questions;
  /// First unanswered question of the current phase.
  std::size_t cursor = 0;
  std::map<std::string, int> answers;
  Instant started_at{};
  Instant deadline{};  // current phase
  friend bool operator==(const SessionState&, const SessionState&) = default;
};

/// Questions of the current phase (empty before Ability and once Finalized).
const std::vector<std::string>& phase_questions(const SessionState& s);

/// True when every question of the current phase is answered or its
/// deadline has passed.
bool phase_ended(const SessionState& s, Instant now);

class InvalidBackground : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class WrongPhase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownQuestion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidChoice : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class PhaseIncomplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws InvalidBackground.
void validate_background(const Background& b);

/// Validates the background and draws the ability questions (per_subject
/// from each group subject, blocks in ability_subjects order) and the
/// intelligence questions. The draw depends only on the bank and the seed.
SessionState start_session(std::string id, const Background& background, ScienceGroup group,
                           const QuestionBank& bank, const TestPlan& plan, std::uint64_t seed,
                           Instant now);

/// Moves an expired Ability phase on to Intelligence. The intelligence clock
/// starts at the moment the ability phase ended.
void advance_clock(SessionState& s, Instant now, const TestPlan& plan);

enum class SubmitStatus { Recorded, DeadlineExpired };

/// Records an answer (last write wins) unless the phase deadline has passed,
/// in which case the answer is dropped and the phase moves on. Finishing the
/// ability questions starts the intelligence phase at once.
/// Throws WrongPhase, UnknownQuestion or InvalidChoice.
SubmitStatus submit_answer(SessionState& s, std::string_view question_id, int choice, Instant at,
                           const QuestionBank& bank, const TestPlan& plan);

struct ScoreSheet {
  std::array<double, kSubjectCount> percent{};  // indexed by Subject
  double operator[](Subject s) const { return percent[static_cast<std::size_t>(s)]; }
  friend bool operator==(const ScoreSheet&, const ScoreSheet&) = default;
};

/// 100 * correct / drawn for each subject; subjects not drawn score 0.
ScoreSheet score(const SessionState& s, const QuestionBank& bank);

kb::StudentRecord build_record(const Background& b, const ScoreSheet& sheet);

struct FinalResult {
  kb::StudentRecord record;
  ScoreSheet sheet;
};

/// Requires the intelligence phase to have ended; moves the session to
/// Finalized. Throws PhaseIncomplete.
FinalResult finalize(SessionState& s, Instant at, const QuestionBank& bank, const TestPlan& plan);

}  // namespace advisor::assessment
