#include "advisor/service/session_store.hpp"

#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace advisor::service {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomically(const std::filesystem::path& p, const std::string& bytes) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

json snapshot_json(const StoredSession& s) {
  json j = {{"version", s.version},
            {"created-at", to_epoch_ms(s.created_at)},
            {"state", to_json(s.state)}};
  if (s.record) j["record"] = to_json(*s.record);
  return j;
}

}  // namespace

SessionStore::SessionStore(std::filesystem::path dir, std::size_t snapshot_every)
    : dir_(std::move(dir)), snapshot_every_(snapshot_every ? snapshot_every : 1) {
  if (persistent()) std::filesystem::create_directories(dir_);
}

void SessionStore::append(const StoredSession& after, const std::string& line) {
  const auto session_dir = dir_ / after.state.id;
  std::ofstream out(session_dir / "events.jsonl", std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot append to the event log of " + after.state.id);
}

void SessionStore::maybe_snapshot(const StoredSession& s) {
  if (s.version % snapshot_every_ == 0) {
    write_atomically(dir_ / s.state.id / "snapshot.json", snapshot_json(s).dump());
  }
}

void SessionStore::record_created(const StoredSession& s) {
  if (!persistent()) return;
  std::filesystem::create_directories(dir_ / s.state.id);
  json e = {{"type", "created"}, {"version", s.version}, {"created-at", to_epoch_ms(s.created_at)},
            {"state", to_json(s.state)}};
  append(s, e.dump());
}

void SessionStore::record_answer(const StoredSession& after, std::string_view question_id, int choice,
                                 assessment::Instant at) {
  if (!persistent()) return;
  json e = {{"type", "answer"}, {"version", after.version}, {"question-id", question_id},
            {"choice", choice}, {"at", to_epoch_ms(at)}};
  append(after, e.dump());
  maybe_snapshot(after);
}

void SessionStore::record_tick(const StoredSession& after, assessment::Instant at) {
  if (!persistent()) return;
  json e = {{"type", "tick"}, {"version", after.version}, {"at", to_epoch_ms(at)}};
  append(after, e.dump());
  maybe_snapshot(after);
}

void SessionStore::record_finalized(const StoredSession& after, assessment::Instant at) {
  if (!persistent()) return;
  if (after.report_raw) write_atomically(dir_ / after.state.id / "report.txt", *after.report_raw);
  json e = {{"type", "finalized"}, {"version", after.version}, {"at", to_epoch_ms(at)}};
  if (after.record) e["record"] = to_json(*after.record);
  append(after, e.dump());
  write_atomically(dir_ / after.state.id / "snapshot.json", snapshot_json(after).dump());
}

std::vector<StoredSession> SessionStore::load_all(const assessment::QuestionBank& bank,
                                                  const assessment::TestPlan& plan) const {
  std::vector<StoredSession> out;
  if (!persistent() || !std::filesystem::exists(dir_)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_directory()) continue;
    const auto events_path = entry.path() / "events.jsonl";
    const auto snapshot_path = entry.path() / "snapshot.json";
    const bool have_events = std::filesystem::exists(events_path);
    if (!have_events && !std::filesystem::exists(snapshot_path)) continue;

    StoredSession s;
    bool have_state = false;
    if (std::filesystem::exists(snapshot_path)) {
      const auto j = json::parse(slurp(snapshot_path));
      s.version = j.at("version").get<std::uint64_t>();
      s.created_at = from_epoch_ms(j.at("created-at").get<std::int64_t>());
      s.state = session_from_json(j.at("state"));
      if (j.contains("record")) s.record = record_from_json(j.at("record"));
      have_state = true;
    }
    std::istringstream events(have_events ? slurp(events_path) : std::string());
    std::string line;
    while (std::getline(events, line)) {
      if (line.empty()) continue;
      json e;
      try {
        e = json::parse(line);
      } catch (const json::exception&) {
        break;  // torn final write
      }
      const auto version = e.at("version").get<std::uint64_t>();
      const auto type = e.at("type").get<std::string>();
      if (type == "created") {
        if (have_state) continue;
        s.version = version;
        s.created_at = from_epoch_ms(e.at("created-at").get<std::int64_t>());
        s.state = session_from_json(e.at("state"));
        have_state = true;
        continue;
      }
      if (!have_state || version <= s.version) continue;
      const auto at = from_epoch_ms(e.at("at").get<std::int64_t>());
      if (type == "answer") {
        try {
          assessment::submit_answer(s.state, e.at("question-id").get<std::string>(), e.at("choice").get<int>(), at,
                                    bank, plan);
        } catch (const std::exception&) {
          // rejected the first time round as well
        }
      } else if (type == "tick") {
        assessment::advance_clock(s.state, at, plan);
      } else if (type == "finalized") {
        auto result = assessment::finalize(s.state, at, bank, plan);
        s.record = e.contains("record") ? record_from_json(e.at("record")) : result.record;
      }
      s.version = version;
    }
    if (!have_state) continue;
    if (s.state.phase == assessment::Phase::Finalized && std::filesystem::exists(entry.path() / "report.txt")) {
      s.report_raw = slurp(entry.path() / "report.txt");
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace advisor::service
