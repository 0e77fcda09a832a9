#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advisor::assessment {

enum class Subject { English, Mathematics, Physics, Chemistry, ComputerScience, Biology, Intelligence };

inline constexpr std::size_t kSubjectCount = 7;

std::string_view to_string(Subject s);
std::optional<Subject> parse_subject(std::string_view text);

struct Question {
  std::string id;
  Subject subject = Subject::English;
  std::string prompt;
  std::vector<std::string> choices;  // 2 to 6
  int correct_index = 0;
  friend bool operator==(const Question&, const Question&) = default;
};

class BankParseError : public std::runtime_error {
 public:
  BankParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class InsufficientQuestions : public std::runtime_error {
 public:
  InsufficientQuestions(Subject subject, std::size_t have, std::size_t need);
  Subject subject() const noexcept { return subject_; }
  std::size_t have() const noexcept { return have_; }
  std::size_t need() const noexcept { return need_; }

 private:
  Subject subject_;
  std::size_t have_;
  std::size_t need_;
};

struct BankMinimums {
  std::size_t per_ability_subject = 20;
  std::size_t intelligence = 50;
};

/// Immutable question pool. Line format, one question per line:
///
///   id|Subject|prompt|choice;choice;...|correct-index
///
/// Blank lines and lines starting with '#' are skipped.
class QuestionBank {
 public:
  /// Throws BankParseError or InsufficientQuestions.
  static QuestionBank parse(std::string_view text, BankMinimums minimums = {});

  const std::vector<Question>& questions() const noexcept { return questions_; }
  const Question* find(std::string_view id) const;
  /// File order.
  std::vector<const Question*> by_subject(Subject s) const;
  std::size_t count(Subject s) const;

 private:
  std::vector<Question> questions_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Throws BankParseError (also for unreadable files) or InsufficientQuestions.
QuestionBank load_bank(const std::filesystem::path& path, BankMinimums minimums = {});

/// Inverse of QuestionBank::parse for one question.
std::string format_question(const Question& q);

}  // namespace advisor::assessment
