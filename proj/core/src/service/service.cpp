#include "advisor/service/service.hpp"

#include <cstdio>

#include "advisor/kb/advise.hpp"
#include "json_codec.hpp"

namespace advisor::service {

struct AdvisorService::Entry {
  std::mutex mutex;
  StoredSession s;
};

namespace {

ApiResponse error(std::string_view code, const std::string& message, json extra = json::object()) {
  extra["error"] = {{"code", code}, {"message", message}};
  return {status_for(code), extra.dump()};
}

ApiResponse ok(const json& body, int status = 200) { return {status, body.dump()}; }

std::string report_url(const std::string& id) { return "/sessions/" + id + "/report"; }

json finalized_body(const StoredSession& s) {
  return {{"session-id", s.state.id},
          {"phase", "finalized"},
          {"finalized", true},
          {"version", s.version},
          {"report-url", report_url(s.state.id)}};
}

std::shared_ptr<const kb::KnowledgeBase> load_knowledge_base(const ServiceConfig& config) {
  if (config.kb_paths.empty()) return std::make_shared<const kb::KnowledgeBase>(kb::default_kb());
  return std::make_shared<const kb::KnowledgeBase>(kb::load_kb(config.kb_paths));
}

}  // namespace

int status_for(std::string_view code) {
  static const std::map<std::string_view, int> table = {
      {"bad-request", 400},        {"unauthorized", 401},     {"not-found", 404},
      {"unknown-question", 422},   {"invalid-background", 422}, {"invalid-choice", 422},
      {"kb-invalid", 422},         {"finalized", 409},        {"wrong-phase", 409},
      {"not-finalized", 409},      {"version-conflict", 409}, {"deadline-expired", 410},
      {"engine-error", 500},
  };
  const auto it = table.find(code);
  return it == table.end() ? 500 : it->second;
}

AdvisorService::AdvisorService(ServiceConfig config, std::shared_ptr<const Clock> clock)
    : AdvisorService(config, assessment::load_bank(config.bank_path),
                     *load_knowledge_base(config), std::move(clock)) {}

AdvisorService::AdvisorService(ServiceConfig config, assessment::QuestionBank bank, kb::KnowledgeBase kb,
                               std::shared_ptr<const Clock> clock)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : std::make_shared<SystemClock>()),
      bank_(std::move(bank)),
      store_(config_.data_dir, config_.snapshot_every),
      kb_(std::make_shared<const kb::KnowledgeBase>(std::move(kb))),
      rng_(std::random_device{}()) {
  for (auto& s : store_.load_all(bank_, config_.plan)) {
    auto e = std::make_shared<Entry>();
    const auto id = s.state.id;
    e->s = std::move(s);
    sessions_.emplace(id, std::move(e));
  }
}

AdvisorService::~AdvisorService() = default;

std::shared_ptr<const kb::KnowledgeBase> AdvisorService::knowledge_base() const {
  std::lock_guard lock(kb_mutex_);
  return kb_;
}

std::size_t AdvisorService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<AdvisorService::Entry> AdvisorService::find(std::string_view id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string AdvisorService::new_session_id() {
  std::lock_guard lock(rng_mutex_);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                static_cast<unsigned long long>(rng_()));
  return buf;
}

std::string AdvisorService::question_body(const StoredSession& s, Instant now) const {
  const auto& qs = assessment::phase_questions(s.state);
  const auto remaining = std::max<std::int64_t>(0, (s.state.deadline - now).count() / 1000);
  json body = {{"session-id", s.state.id},
               {"phase", std::string(assessment::to_string(s.state.phase))},
               {"version", s.version},
               {"finalized", false},
               {"total", qs.size()},
               {"remaining-seconds", remaining},
               {"deadline", iso8601(s.state.deadline)},
               {"deadline-epoch-ms", to_epoch_ms(s.state.deadline)}};
  if (s.state.cursor < qs.size()) {
    const auto* q = bank_.find(qs[s.state.cursor]);
    body["index"] = s.state.cursor + 1;
    body["question"] = {{"id", q->id},
                        {"subject", std::string(assessment::to_string(q->subject))},
                        {"prompt", q->prompt},
                        {"choices", q->choices}};
  }
  return body.dump();
}

void AdvisorService::finalize_locked(Entry& e, Instant now) {
  auto state = e.s.state;
  auto result = assessment::finalize(state, now, bank_, config_.plan);
  const auto kb = knowledge_base();
  auto advice = kb::evaluate_student(result.record, *kb);
  e.s.state = std::move(state);
  e.s.record = result.record;
  e.s.report_raw = std::move(advice.raw);
  ++e.s.version;
  store_.record_finalized(e.s, now);
}

void AdvisorService::catch_up(Entry& e, Instant now) {
  auto& st = e.s.state;
  if (st.phase == assessment::Phase::Ability && now > st.deadline) {
    assessment::advance_clock(st, now, config_.plan);
    ++e.s.version;
    store_.record_tick(e.s, now);
  }
  if (st.phase == assessment::Phase::Intelligence && assessment::phase_ended(st, now)) finalize_locked(e, now);
}

ApiResponse AdvisorService::create_session(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& ex) {
    return error("bad-request", std::string("malformed JSON: ") + ex.what());
  }
  if (!j.is_object()) return error("bad-request", "body must be a JSON object");
  assessment::Background background;
  std::optional<assessment::ScienceGroup> group;
  try {
    if (!j.contains("background")) throw assessment::InvalidBackground("missing background");
    background = background_from_json(j.at("background"));
    if (!j.contains("science-group") || !j.at("science-group").is_string()) {
      throw assessment::InvalidBackground("missing science-group (CS or Biology)");
    }
    group = assessment::parse_science_group(j.at("science-group").get<std::string>());
    if (!group) throw assessment::InvalidBackground("science-group must be CS or Biology");
  } catch (const assessment::InvalidBackground& ex) {
    return error("invalid-background", ex.what());
  }

  const auto now = clock_->now();
  auto id = new_session_id();
  std::uint64_t seed = 0;
  {
    std::lock_guard lock(rng_mutex_);
    seed = config_.seed ? *config_.seed : rng_();
  }
  auto e = std::make_shared<Entry>();
  e->s.state = assessment::start_session(id, background, *group, bank_, config_.plan, seed, now);
  e->s.created_at = now;
  e->s.version = 1;
  store_.record_created(e->s);
  const auto response = question_body(e->s, now);
  {
    std::unique_lock lock(sessions_mutex_);
    sessions_.emplace(id, e);
  }
  return {201, response};
}

ApiResponse AdvisorService::get_question(std::string_view id) {
  auto e = find(id);
  if (!e) return error("not-found", "no session " + std::string(id));
  std::lock_guard lock(e->mutex);
  const auto now = clock_->now();
  try {
    catch_up(*e, now);
  } catch (const std::exception& ex) {
    return error("engine-error", ex.what());
  }
  if (e->s.state.phase == assessment::Phase::Finalized) {
    return error("finalized", "session is finalized", finalized_body(e->s));
  }
  return {200, question_body(e->s, now)};
}

ApiResponse AdvisorService::submit_answer(std::string_view id, std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& ex) {
    return error("bad-request", std::string("malformed JSON: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("question-id") || !j.at("question-id").is_string() ||
      !j.contains("choice-index") || !j.at("choice-index").is_number_integer()) {
    return error("bad-request", "body needs question-id (string) and choice-index (integer)");
  }
  const auto question_id = j.at("question-id").get<std::string>();
  const auto choice64 = j.at("choice-index").get<std::int64_t>();
  const int choice = choice64 < -1 || choice64 > 1000 ? -1 : static_cast<int>(choice64);

  auto e = find(id);
  if (!e) return error("not-found", "no session " + std::string(id));
  std::lock_guard lock(e->mutex);
  auto& s = e->s;
  if (j.contains("version")) {
    if (!j.at("version").is_number_unsigned() || j.at("version").get<std::uint64_t>() != s.version) {
      return error("version-conflict", "session is at version " + std::to_string(s.version),
                   {{"version", s.version}});
    }
  }
  if (s.state.phase == assessment::Phase::Finalized) {
    return error("finalized", "session is finalized", finalized_body(s));
  }
  const auto now = clock_->now();
  const auto phase_before = s.state.phase;
  assessment::SubmitStatus status;
  try {
    status = assessment::submit_answer(s.state, question_id, choice, now, bank_, config_.plan);
  } catch (const assessment::WrongPhase& ex) {
    return error("wrong-phase", ex.what(), {{"phase", std::string(assessment::to_string(s.state.phase))}});
  } catch (const assessment::UnknownQuestion& ex) {
    return error("unknown-question", ex.what());
  } catch (const assessment::InvalidChoice& ex) {
    return error("invalid-choice", ex.what());
  }
  if (status == assessment::SubmitStatus::Recorded) {
    ++s.version;
    store_.record_answer(s, question_id, choice, now);
  } else if (s.state.phase != phase_before) {
    ++s.version;
    store_.record_tick(s, now);
  }
  try {
    catch_up(*e, now);
  } catch (const std::exception& ex) {
    return error("engine-error", ex.what());
  }

  json out = s.state.phase == assessment::Phase::Finalized ? finalized_body(s) : json::parse(question_body(s, now));
  if (status == assessment::SubmitStatus::DeadlineExpired) {
    return error("deadline-expired", "the " + std::string(assessment::to_string(phase_before)) +
                                         " deadline has passed; the answer was not counted",
                 out);
  }
  out["status"] = "recorded";
  return ok(out);
}

ApiResponse AdvisorService::get_report(std::string_view id, bool raw) {
  auto e = find(id);
  if (!e) return error("not-found", "no session " + std::string(id));
  std::lock_guard lock(e->mutex);
  try {
    catch_up(*e, clock_->now());
  } catch (const std::exception& ex) {
    return error("engine-error", ex.what());
  }
  const auto& s = e->s;
  if (s.state.phase != assessment::Phase::Finalized || !s.report_raw) {
    return error("not-finalized", "session is still in the " +
                                      std::string(assessment::to_string(s.state.phase)) + " phase");
  }
  if (raw) return {200, *s.report_raw, "text/plain; charset=utf-8"};
  json body = to_json(kb::parse_report(*s.report_raw));
  body["session-id"] = s.state.id;
  if (s.record) body["record"] = to_json(*s.record);
  return ok(body);
}

ApiResponse AdvisorService::reload_kb(std::string_view admin_token) {
  if (config_.admin_token.empty() || admin_token != config_.admin_token) {
    return error("unauthorized", "admin token required");
  }
  std::shared_ptr<const kb::KnowledgeBase> fresh;
  try {
    fresh = load_knowledge_base(config_);
  } catch (const kb::KbError& ex) {
    json diagnostics = json::array();
    for (const auto& d : ex.diagnostics()) diagnostics.push_back(dsl::format(d));
    return error("kb-invalid", ex.what(), {{"diagnostics", diagnostics}});
  }
  {
    std::lock_guard lock(kb_mutex_);
    kb_ = fresh;
  }
  return ok({{"rules", fresh->rule_count()}, {"templates", fresh->template_count()}});
}

}  // namespace advisor::service
