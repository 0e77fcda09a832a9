#include "json_codec.hpp"

#include <ctime>

namespace advisor::service {

using assessment::InvalidBackground;

std::int64_t to_epoch_ms(assessment::Instant t) { return t.time_since_epoch().count(); }

assessment::Instant from_epoch_ms(std::int64_t ms) { return assessment::Instant{std::chrono::milliseconds{ms}}; }

std::string iso8601(assessment::Instant t) {
  const auto ms = to_epoch_ms(t);
  auto secs = static_cast<std::time_t>(ms / 1000);
  auto frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%.*s.%03dZ", static_cast<int>(n), buf, static_cast<int>(frac));
  return out;
}

json to_json(const assessment::SessionState& s) {
  json answers = json::object();
  for (const auto& [id, choice] : s.answers) answers[id] = choice;
  return {
      {"id", s.id},
      {"background",
       {{"stdid", s.background.stdid},
        {"name", s.background.name},
        {"age", s.background.age},
        {"academic-per", s.background.academic_per},
        {"academic-type", s.background.academic_type},
        {"HSSC-year", s.background.hssc_year}}},
      {"science-group", std::string(assessment::to_string(s.group))},
      {"phase", std::string(assessment::to_string(s.phase))},
      {"ability-questions", s.ability_questions},
      {"intelligence-questions", s.intelligence_questions},
      {"cursor", s.cursor},
      {"answers", answers},
      {"started-at", to_epoch_ms(s.started_at)},
      {"deadline", to_epoch_ms(s.deadline)},
  };
}

assessment::SessionState session_from_json(const json& j) {
  assessment::SessionState s;
  s.id = j.at("id").get<std::string>();
  const auto& b = j.at("background");
  s.background.stdid = b.at("stdid").get<std::int64_t>();
  s.background.name = b.at("name").get<std::string>();
  s.background.age = b.at("age").get<std::int64_t>();
  s.background.academic_per = b.at("academic-per").get<double>();
  s.background.academic_type = b.at("academic-type").get<std::string>();
  s.background.hssc_year = b.at("HSSC-year").get<std::int64_t>();
  const auto group = assessment::parse_science_group(j.at("science-group").get<std::string>());
  const auto phase = assessment::parse_phase(j.at("phase").get<std::string>());
  if (!group || !phase) throw std::runtime_error("corrupt session record " + s.id);
  s.group = *group;
  s.phase = *phase;
  s.ability_questions = j.at("ability-questions").get<std::vector<std::string>>();
  s.intelligence_questions = j.at("intelligence-questions").get<std::vector<std::string>>();
  s.cursor = j.at("cursor").get<std::size_t>();
  for (const auto& [id, choice] : j.at("answers").items()) s.answers[id] = choice.get<int>();
  s.started_at = from_epoch_ms(j.at("started-at").get<std::int64_t>());
  s.deadline = from_epoch_ms(j.at("deadline").get<std::int64_t>());
  return s;
}

json to_json(const kb::StudentRecord& r) {
  return {
      {"stdid", r.stdid},
      {"name", r.name},
      {"age", r.age},
      {"academic-per", r.academic_per},
      {"academic-type", r.academic_type},
      {"HSSC-year", r.hssc_year},
      {"int-test-per", r.int_test_per},
      {"ability-test-eng-per", r.eng_per},
      {"ability-test-phy-per", r.phy_per},
      {"ability-test-che-per", r.che_per},
      {"ability-test-cs-per", r.cs_per},
      {"ability-test-math-per", r.math_per},
      {"ability-test-bio-per", r.bio_per},
  };
}

kb::StudentRecord record_from_json(const json& j) {
  kb::StudentRecord r;
  r.stdid = j.at("stdid").get<std::int64_t>();
  r.name = j.at("name").get<std::string>();
  r.age = j.at("age").get<std::int64_t>();
  r.academic_per = j.at("academic-per").get<double>();
  r.academic_type = j.at("academic-type").get<std::string>();
  r.hssc_year = j.at("HSSC-year").get<std::int64_t>();
  for (auto slot : kb::kGateFields) *kb::percent_field(r, slot) = j.at(std::string(slot)).get<double>();
  return r;
}

json to_json(const kb::AdvisementReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"faculty", v.faculty}, {"accepted", v.accepted}, {"recommended", v.recommended}});
  }
  return {
      {"student",
       {{"stdid", r.header.stdid},
        {"name", r.header.name},
        {"age", r.header.age},
        {"academic-per", r.header.academic_per},
        {"academic-type", r.header.academic_type},
        {"HSSC-year", r.header.hssc_year}}},
      {"verdicts", verdicts},
  };
}

assessment::Background background_from_json(const json& j) {
  if (!j.is_object()) throw InvalidBackground("background must be an object");
  assessment::Background b;
  auto integer = [&j](const char* key) {
    if (!j.contains(key)) throw InvalidBackground(std::string("missing ") + key);
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw InvalidBackground(std::string(key) + " must be an integer");
    return v.get<std::int64_t>();
  };
  auto text = [&j](const char* key) {
    if (!j.contains(key)) throw InvalidBackground(std::string("missing ") + key);
    const auto& v = j.at(key);
    if (!v.is_string()) throw InvalidBackground(std::string(key) + " must be a string");
    return v.get<std::string>();
  };
  b.stdid = integer("stdid");
  b.name = text("name");
  b.age = integer("age");
  if (!j.contains("academic-per")) throw InvalidBackground("missing academic-per");
  if (!j.at("academic-per").is_number()) throw InvalidBackground("academic-per must be a number");
  b.academic_per = j.at("academic-per").get<double>();
  b.academic_type = text("academic-type");
  b.hssc_year = integer("HSSC-year");
  assessment::validate_background(b);
  return b;
}

}  // namespace advisor::service
