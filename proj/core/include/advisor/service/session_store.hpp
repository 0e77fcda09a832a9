#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advisor/assessment/session.hpp"
#include "advisor/kb/student_record.hpp"

namespace advisor::service {

struct StoredSession {
  assessment::SessionState state;
  assessment::Instant created_at{};
  std::uint64_t version = 0;
  std::optional<kb::StudentRecord> record;  // set once finalized
  std::optional<std::string> report_raw;    // std-data-out bytes
};

/// Append-only event log per session plus periodic snapshots:
///
///   <dir>/<session-id>/events.jsonl   created, answer, tick, finalized
///   <dir>/<session-id>/snapshot.json  state as of some version
///   <dir>/<session-id>/report.txt     written before the finalized event
///
/// An empty directory keeps nothing on disk. Not thread-safe per session;
/// callers serialize writes to one session.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir, std::size_t snapshot_every = 25);

  bool persistent() const noexcept { return !dir_.empty(); }

  void record_created(const StoredSession& s);
  void record_answer(const StoredSession& after, std::string_view question_id, int choice,
                     assessment::Instant at);
  void record_tick(const StoredSession& after, assessment::Instant at);
  void record_finalized(const StoredSession& after, assessment::Instant at);

  /// Rebuilds every stored session from its snapshot and the events after
  /// it, replaying answers through the assessment rules.
  std::vector<StoredSession> load_all(const assessment::QuestionBank& bank,
                                      const assessment::TestPlan& plan) const;

 private:
  void append(const StoredSession& after, const std::string& line);
  void maybe_snapshot(const StoredSession& s);

  std::filesystem::path dir_;
  std::size_t snapshot_every_;
};

}  // namespace advisor::service
