#include "advisor/kb/advise.hpp"

#include <atomic>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>

#include "advisor/engine/session.hpp"

namespace advisor::kb {
namespace {

Advisement run_with(const KnowledgeBase& kb,
                    std::shared_ptr<engine::FileStore> files,
                    const std::function<std::string()>& read_output) {
  std::size_t fired = 0;
  try {
    engine::Session session(kb.rules(), {std::move(files), nullptr, nullptr});
    fired = session.run();
  } catch (const engine::EngineError& e) {
    throw EngineRuntimeError(e.code(), e.what());
  }
  Advisement out;
  out.raw = read_output();
  out.report = parse_report(out.raw);
  out.fire_count = fired;
  return out;
}

std::filesystem::path fresh_temp_dir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const auto root = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto dir = root / ("advisor-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(dir)) return dir;
  }
  throw std::runtime_error("could not create a temporary directory under " + root.string());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

EngineRuntimeError::EngineRuntimeError(engine::EngineErrc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Advisement evaluate_student(const StudentRecord& record, const KnowledgeBase& kb, Route route) {
  if (route == Route::Files) {
    const auto dir = fresh_temp_dir();
    try {
      auto result = evaluate_student_in(record, kb, dir);
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
      return result;
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
      throw;
    }
  }
  validate_record(record);
  auto store = std::make_shared<engine::MemoryFileStore>();
  store->put(std::string(kInputFile), serialize_record(record));
  return run_with(kb, store, [&store] {
    return store->contents(std::string(kOutputFile)).value_or(std::string());
  });
}

Advisement evaluate_student_in(const StudentRecord& record, const KnowledgeBase& kb,
                               const std::filesystem::path& dir) {
  validate_record(record);
  {
    std::ofstream in(dir / kInputFile, std::ios::binary | std::ios::trunc);
    if (!in) throw std::runtime_error("cannot write " + (dir / kInputFile).string());
    in << serialize_record(record);
  }
  return run_with(kb, std::make_shared<engine::DiskFileStore>(dir),
                  [&dir] { return slurp(dir / kOutputFile); });
}

}  // namespace advisor::kb
