#include "wotforge/api/config.hpp"

#include "wotforge/core/json.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace wotforge::api {

namespace {

long long parse_number(std::string_view text, std::string_view what) {
  long long value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value < 0) {
    throw std::invalid_argument(std::string(what) + ": not a non-negative integer: " +
                                std::string(text));
  }
  return value;
}

template <class T> T member(const Json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw std::invalid_argument(std::string("config: bad type for ") + key);
  }
}

void apply_file(ServerConfig& config, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot read config file " + file.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config file " + file.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config file must hold a JSON object");

  static constexpr std::string_view known[] = {"addr", "dataDir", "uiOrigin", "fetchTimeoutMs",
                                               "maxBodyBytes", "rateLimitPerMinute",
                                               "compactThreshold", "forges"};
  for (const auto& [key, value] : doc.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) throw std::invalid_argument("config: unknown member \"" + key + "\"");
  }

  if (doc.contains("addr")) {
    std::tie(config.host, config.port) = parse_addr(member<std::string>(doc, "addr", ""));
  }
  auto base = file.parent_path();
  if (doc.contains("dataDir")) config.data_dir = base / member<std::string>(doc, "dataDir", "");
  if (doc.contains("uiOrigin")) config.ui_origin = member<std::string>(doc, "uiOrigin", "");
  config.fetch_timeout = std::chrono::milliseconds(
      member<std::uint64_t>(doc, "fetchTimeoutMs", config.fetch_timeout.count()));
  config.max_body_bytes = member<std::size_t>(doc, "maxBodyBytes", config.max_body_bytes);
  config.rate_limit_per_minute =
      member<unsigned>(doc, "rateLimitPerMinute", config.rate_limit_per_minute);
  config.compact_threshold = member<std::size_t>(doc, "compactThreshold", config.compact_threshold);
  if (doc.contains("forges")) config.forges_file = base / member<std::string>(doc, "forges", "");
}

} // namespace

std::optional<std::string> process_env(std::string_view name) {
  const char* value = std::getenv(std::string(name).c_str());
  if (!value) return std::nullopt;
  return std::string(value);
}

std::pair<std::string, int> parse_addr(std::string_view addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("address must be host:port, got \"" + std::string(addr) + "\"");
  }
  auto host = std::string(addr.substr(0, colon));
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  auto port = parse_number(addr.substr(colon + 1), "port");
  if (port > 65535) throw std::invalid_argument("port out of range");
  return {host, static_cast<int>(port)};
}

ServerConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  ServerConfig config;
  if (file) apply_file(config, *file);
  if (auto v = env("WOTIFY_ADDR")) std::tie(config.host, config.port) = parse_addr(*v);
  if (auto v = env("WOTIFY_DATA_DIR")) config.data_dir = *v;
  if (auto v = env("WOTIFY_UI_ORIGIN")) {
    if (v->empty()) config.ui_origin.reset(); else config.ui_origin = *v;
  }
  if (auto v = env("WOTIFY_FETCH_TIMEOUT_MS")) {
    config.fetch_timeout = std::chrono::milliseconds(parse_number(*v, "WOTIFY_FETCH_TIMEOUT_MS"));
  }
  return config;
}

} // namespace wotforge::api
