#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "advisor/engine/errors.hpp"
#include "advisor/kb/knowledge_base.hpp"
#include "advisor/kb/report.hpp"
#include "advisor/kb/student_record.hpp"

namespace advisor::kb {

inline constexpr std::string_view kInputFile = "std-data-in.txt";
inline constexpr std::string_view kOutputFile = "std-data-out.txt";

enum class Route {
  InMemory,  // routers backed by an in-memory file store
  Files,     // real files in a fresh temporary directory
};

struct Advisement {
  std::string raw;  // std-data-out.txt bytes
  AdvisementReport report;
  std::size_t fire_count = 0;
};

class EngineRuntimeError : public std::runtime_error {
 public:
  EngineRuntimeError(engine::EngineErrc code, const std::string& message);
  engine::EngineErrc code() const noexcept { return code_; }

 private:
  engine::EngineErrc code_;
};

/// Writes the record as std-data-in.txt, runs the knowledge base to
/// quiescence and parses std-data-out.txt. Throws MalformedRecord,
/// EngineRuntimeError or ReportFormatError.
Advisement evaluate_student(const StudentRecord& record, const KnowledgeBase& kb,
                            Route route = Route::InMemory);

/// Files route in a caller-chosen directory; the input and output files are
/// left in place.
Advisement evaluate_student_in(const StudentRecord& record, const KnowledgeBase& kb,
                               const std::filesystem::path& dir);

}  // namespace advisor::kb
