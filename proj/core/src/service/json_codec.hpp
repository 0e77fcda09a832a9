#pragma once

#include <string>

#include "advisor/assessment/session.hpp"
#include "advisor/kb/report.hpp"
#include "advisor/kb/student_record.hpp"
#include "json.hpp"

namespace advisor::service {

using nlohmann::json;

std::int64_t to_epoch_ms(assessment::Instant t);
assessment::Instant from_epoch_ms(std::int64_t ms);
/// UTC, millisecond precision: 2024-01-02T03:04:05.678Z
std::string iso8601(assessment::Instant t);

json to_json(const assessment::SessionState& s);
assessment::SessionState session_from_json(const json& j);

json to_json(const kb::StudentRecord& r);
kb::StudentRecord record_from_json(const json& j);

json to_json(const kb::AdvisementReport& r);

/// Throws assessment::InvalidBackground for missing or mistyped fields.
assessment::Background background_from_json(const json& j);

}  // namespace advisor::service
