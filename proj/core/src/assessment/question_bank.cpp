#include "advisor/assessment/question_bank.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace advisor::assessment {
namespace {

constexpr std::array<std::string_view, kSubjectCount> kSubjectNames = {
    "English", "Mathematics", "Physics", "Chemistry", "ComputerScience", "Biology", "Intelligence"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(Subject s) { return kSubjectNames[static_cast<std::size_t>(s)]; }

std::optional<Subject> parse_subject(std::string_view text) {
  for (std::size_t i = 0; i < kSubjectNames.size(); ++i) {
    if (kSubjectNames[i] == text) return static_cast<Subject>(i);
  }
  return std::nullopt;
}

BankParseError::BankParseError(int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + message),
      line_(line) {}

InsufficientQuestions::InsufficientQuestions(Subject subject, std::size_t have, std::size_t need)
    : std::runtime_error("InsufficientQuestions(" + std::string(to_string(subject)) + ", " +
                         std::to_string(have) + ", " + std::to_string(need) + ")"),
      subject_(subject),
      have_(have),
      need_(need) {}

QuestionBank QuestionBank::parse(std::string_view text, BankMinimums minimums) {
  QuestionBank bank;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split(line, '|');
    if (fields.size() != 5) {
      throw BankParseError(line_no, "expected 5 '|'-separated fields, got " + std::to_string(fields.size()));
    }
    Question q;
    q.id = std::string(trim(fields[0]));
    if (q.id.empty() || q.id.find_first_of(" \t") != std::string::npos) {
      throw BankParseError(line_no, "question id must be a non-empty token");
    }
    const auto subject = parse_subject(trim(fields[1]));
    if (!subject) throw BankParseError(line_no, "unknown subject '" + std::string(trim(fields[1])) + "'");
    q.subject = *subject;
    q.prompt = std::string(trim(fields[2]));
    if (q.prompt.empty()) throw BankParseError(line_no, "empty prompt");
    for (auto c : split(fields[3], ';')) {
      c = trim(c);
      if (c.empty()) throw BankParseError(line_no, "empty choice");
      q.choices.emplace_back(c);
    }
    if (q.choices.size() < 2 || q.choices.size() > 6) {
      throw BankParseError(line_no, "a question needs 2 to 6 choices");
    }
    const auto idx = trim(fields[4]);
    const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), q.correct_index);
    if (ec != std::errc{} || ptr != idx.data() + idx.size() || q.correct_index < 0 ||
        static_cast<std::size_t>(q.correct_index) >= q.choices.size()) {
      throw BankParseError(line_no, "correct index '" + std::string(idx) + "' out of range");
    }
    if (!bank.index_.emplace(q.id, bank.questions_.size()).second) {
      throw BankParseError(line_no, "duplicate question id '" + q.id + "'");
    }
    bank.questions_.push_back(std::move(q));
  }
  for (std::size_t i = 0; i < kSubjectCount; ++i) {
    const auto s = static_cast<Subject>(i);
    const auto need = s == Subject::Intelligence ? minimums.intelligence : minimums.per_ability_subject;
    const auto have = bank.count(s);
    if (have < need) throw InsufficientQuestions(s, have, need);
  }
  return bank;
}

const Question* QuestionBank::find(std::string_view id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &questions_[it->second];
}

std::vector<const Question*> QuestionBank::by_subject(Subject s) const {
  std::vector<const Question*> out;
  for (const auto& q : questions_) {
    if (q.subject == s) out.push_back(&q);
  }
  return out;
}

std::size_t QuestionBank::count(Subject s) const {
  std::size_t n = 0;
  for (const auto& q : questions_) n += q.subject == s;
  return n;
}

QuestionBank load_bank(const std::filesystem::path& path, BankMinimums minimums) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BankParseError(0, "cannot read question bank " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return QuestionBank::parse(buf.str(), minimums);
}

std::string format_question(const Question& q) {
  std::string out = q.id + "|" + std::string(to_string(q.subject)) + "|" + q.prompt + "|";
  for (std::size_t i = 0; i < q.choices.size(); ++i) {
    if (i) out += ';';
    out += q.choices[i];
  }
  return out + "|" + std::to_string(q.correct_index);
}

}  // namespace advisor::assessment
