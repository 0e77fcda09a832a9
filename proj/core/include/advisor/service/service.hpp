#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "advisor/assessment/question_bank.hpp"
#include "advisor/kb/knowledge_base.hpp"
#include "advisor/service/clock.hpp"
#include "advisor/service/config.hpp"
#include "advisor/service/session_store.hpp"

namespace advisor::service {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Error codes and their HTTP statuses.
///   bad-request 400, unauthorized 401, not-found 404, unknown-question 422,
///   invalid-background 422, invalid-choice 422, kb-invalid 422,
///   finalized 409, wrong-phase 409, not-finalized 409, version-conflict 409,
///   deadline-expired 410, engine-error 500
int status_for(std::string_view error_code);

/// Transport-independent API. Every method is safe to call concurrently;
/// requests for one session are serialized.
class AdvisorService {
 public:
  /// Loads the bank and knowledge base named in the config and resumes
  /// persisted sessions.
  explicit AdvisorService(ServiceConfig config, std::shared_ptr<const Clock> clock = nullptr);
  AdvisorService(ServiceConfig config, assessment::QuestionBank bank, kb::KnowledgeBase kb,
                 std::shared_ptr<const Clock> clock = nullptr);
  ~AdvisorService();

  AdvisorService(const AdvisorService&) = delete;
  AdvisorService& operator=(const AdvisorService&) = delete;

  /// POST /sessions  {"background": {...}, "science-group": "CS" | "Biology"}
  ApiResponse create_session(std::string_view body);
  /// GET /sessions/{id}/question
  ApiResponse get_question(std::string_view id);
  /// POST /sessions/{id}/answer  {"question-id": "...", "choice-index": n, "version"?: n}
  ApiResponse submit_answer(std::string_view id, std::string_view body);
  /// GET /sessions/{id}/report[?format=raw]
  ApiResponse get_report(std::string_view id, bool raw);
  /// POST /admin/reload-kb
  ApiResponse reload_kb(std::string_view admin_token);

  std::shared_ptr<const kb::KnowledgeBase> knowledge_base() const;
  const assessment::QuestionBank& bank() const noexcept { return bank_; }
  const ServiceConfig& config() const noexcept { return config_; }
  std::size_t session_count() const;

 private:
  struct Entry;

  std::shared_ptr<Entry> find(std::string_view id) const;
  std::string new_session_id();
  /// Applies deadline expiry and auto-finalization. Entry lock held.
  void catch_up(Entry& e, Instant now);
  void finalize_locked(Entry& e, Instant now);
  std::string question_body(const StoredSession& s, Instant now) const;

  ServiceConfig config_;
  std::shared_ptr<const Clock> clock_;
  assessment::QuestionBank bank_;
  SessionStore store_;

  mutable std::mutex kb_mutex_;
  std::shared_ptr<const kb::KnowledgeBase> kb_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;

  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

}  // namespace advisor::service
