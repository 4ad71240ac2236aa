#include "wotforge/cli/config.hpp"

#include "wotforge/core/json.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace wotforge::cli {

std::optional<std::string> process_env(std::string_view name) {
  const char* value = std::getenv(std::string(name).c_str());
  if (!value) return std::nullopt;
  return std::string(value);
}

std::optional<std::filesystem::path> config_path(const EnvLookup& env) {
  if (auto explicit_path = env("WOTIFY_CONFIG"); explicit_path && !explicit_path->empty()) {
    return std::filesystem::path(*explicit_path);
  }
  if (auto xdg = env("XDG_CONFIG_HOME"); xdg && !xdg->empty()) {
    return std::filesystem::path(*xdg) / "wotify" / "config.json";
  }
  if (auto home = env("HOME"); home && !home->empty()) {
    return std::filesystem::path(*home) / ".config" / "wotify" / "config.json";
  }
  return std::nullopt;
}

CliConfig load_cli_config(const EnvLookup& env) {
  CliConfig config;
  auto path = config_path(env);
  if (path && std::filesystem::exists(*path)) {
    std::ifstream in(*path);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument(path->string() + ": " + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument(path->string() + ": expected a JSON object");
    try {
      if (doc.contains("registry")) config.registry = doc["registry"].get<std::string>();
      if (doc.contains("token")) config.token = doc["token"].get<std::string>();
      if (doc.contains("forges")) config.forges_file = path->parent_path() / doc["forges"].get<std::string>();
    } catch (const Json::type_error&) {
      throw std::invalid_argument(path->string() + ": registry, token and forges must be strings");
    }
  }
  if (auto v = env("WOTIFY_REGISTRY"); v && !v->empty()) config.registry = *v;
  if (auto v = env("WOTIFY_TOKEN"); v && !v->empty()) config.token = *v;
  return config;
}

} // namespace wotforge::cli
