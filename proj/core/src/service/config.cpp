#include "advisor/service/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace advisor::service {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::chrono::seconds positive_seconds(const json& j, const char* key) {
  const auto v = j.at(key).get<std::int64_t>();
  if (v <= 0) throw ConfigError(std::string(key) + " must be positive");
  return std::chrono::seconds{v};
}

}  // namespace

void parse_listen(std::string_view text, ServiceConfig& config) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError("listen must be host:port, got '" + std::string(text) + "'");
  const auto port = text.substr(colon + 1);
  int value = -1;
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc{} || ptr != port.data() + port.size() || value < 0 || value > 65535) {
    throw ConfigError("bad port in '" + std::string(text) + "'");
  }
  if (colon > 0) config.host = std::string(text.substr(0, colon));
  config.port = value;
}

ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  try {
    const auto j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      static const std::vector<std::string> known = {
          "listen", "data-dir", "bank", "kb", "ability-duration-seconds", "intelligence-duration-seconds",
          "seed", "admin-token", "snapshot-every"};
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
    if (j.contains("listen")) parse_listen(j.at("listen").get<std::string>(), c);
    if (j.contains("data-dir")) c.data_dir = resolve(base_dir, j.at("data-dir").get<std::string>());
    if (!j.contains("bank")) throw ConfigError("config needs a question bank path (\"bank\")");
    c.bank_path = resolve(base_dir, j.at("bank").get<std::string>());
    if (j.contains("kb")) {
      for (const auto& p : j.at("kb")) c.kb_paths.push_back(resolve(base_dir, p.get<std::string>()));
    }
    if (j.contains("ability-duration-seconds")) c.plan.ability_duration = positive_seconds(j, "ability-duration-seconds");
    if (j.contains("intelligence-duration-seconds")) {
      c.plan.intelligence_duration = positive_seconds(j, "intelligence-duration-seconds");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("admin-token")) c.admin_token = j.at("admin-token").get<std::string>();
    if (j.contains("snapshot-every")) {
      c.snapshot_every = j.at("snapshot-every").get<std::size_t>();
      if (c.snapshot_every == 0) throw ConfigError("snapshot-every must be positive");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void apply_env_overrides(ServiceConfig& config, const EnvLookup& env) {
  if (const char* listen = env("ADVISOR_LISTEN"); listen && *listen) parse_listen(listen, config);
  if (const char* dir = env("ADVISOR_DATA_DIR"); dir && *dir) config.data_dir = dir;
}

}  // namespace advisor::service
