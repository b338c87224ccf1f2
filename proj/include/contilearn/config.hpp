#pragma once

#include "contilearn/engine.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace contilearn {

/// Engine settings plus the I/O options a training run needs.
struct RunConfig {
  EngineConfig engine;
  bool has_header = false;
  std::string data_path;  // optional; --data overrides
  std::string out_path;   // optional; --out overrides
};

/// Parses "key = value" lines ('#' starts a comment). Unknown keys,
/// duplicates and out-of-range values throw ConfigError naming the line.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Ordered (key, value) pairs that parse back to the same configuration.
/// Paths are not included.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

/// Shortest-round-trip-safe decimal text: 17 significant digits.
std::string format_double(double v);

}  // namespace contilearn
