#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "advisor/assessment/session.hpp"

namespace advisor::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Empty keeps sessions in memory only.
  std::filesystem::path data_dir;
  std::filesystem::path bank_path;
  /// Empty means the shipped knowledge base.
  std::vector<std::filesystem::path> kb_paths;
  assessment::TestPlan plan;
  /// Fixed draw seed for every session; random per session when unset.
  std::optional<std::uint64_t> seed;
  /// Empty disables POST /admin/reload-kb.
  std::string admin_token;
  std::size_t snapshot_every = 25;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EnvLookup = std::function<const char*(const char*)>;

/// JSON config file. Relative paths resolve against the file's directory.
/// Throws ConfigError.
ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

/// ADVISOR_LISTEN (host:port) and ADVISOR_DATA_DIR.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env);

/// "host:port" or ":port". Throws ConfigError.
void parse_listen(std::string_view text, ServiceConfig& config);

}  // namespace advisor::service
