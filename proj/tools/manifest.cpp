#include "manifest.hpp"

#include <ctime>
#include <cstdio>

namespace dwig::cli {

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::config_hash() const { return cli::config_hash(config); }

std::string iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command_line"] = command_line;
  j["config_hash"] = config_hash();
  j["config"] = config;
  j["seed"] = seed;
  j["tool_version"] = tool_version;
  j["started_at"] = iso8601(started);
  j["finished_at"] = iso8601(finished);
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace dwig::cli
