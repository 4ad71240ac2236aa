#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace wotforge::api {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8337; // 0 picks a free port
  std::filesystem::path data_dir = "wotify-data";
  /// Allowed CORS origin for the browser UI; no CORS headers when unset.
  std::optional<std::string> ui_origin;
  std::chrono::milliseconds fetch_timeout{5000};
  std::size_t max_body_bytes = 1024 * 1024;
  /// Requests per client address per minute; 0 disables limiting.
  unsigned rate_limit_per_minute = 0;
  std::size_t compact_threshold = 10000;
  /// Forge table overriding the built-in one.
  std::optional<std::filesystem::path> forges_file;
  /// One stderr line per request.
  bool access_log = false;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the process environment.
std::optional<std::string> process_env(std::string_view name);

/// "host:port". Throws std::invalid_argument.
std::pair<std::string, int> parse_addr(std::string_view addr);

/// Defaults, then the JSON config file (when given), then WOTIFY_ADDR,
/// WOTIFY_DATA_DIR, WOTIFY_UI_ORIGIN and WOTIFY_FETCH_TIMEOUT_MS.
/// Throws std::invalid_argument on malformed values.
ServerConfig load_config(const std::optional<std::filesystem::path>& file,
                         const EnvLookup& env = process_env);

} // namespace wotforge::api
