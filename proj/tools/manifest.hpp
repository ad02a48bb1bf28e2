#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dwig::cli {

struct RunManifest {
  std::string command_line;
  /// Resolved configuration; keys are kept sorted, so the hash does not
  /// depend on the order keys appeared in the input.
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string tool_version;
  std::chrono::system_clock::time_point started;
  std::chrono::system_clock::time_point finished;
  std::vector<std::string> outputs;

  std::string config_hash() const;
  std::string to_json() const;
};

/// FNV-1a (64 bit) of config.dump(), as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// UTC, "YYYY-MM-DDTHH:MM:SSZ".
std::string iso8601(std::chrono::system_clock::time_point t);

}  // namespace dwig::cli
