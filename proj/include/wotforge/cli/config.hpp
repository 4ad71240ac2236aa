#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace wotforge::cli {

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

std::optional<std::string> process_env(std::string_view name);

inline constexpr const char* kDefaultRegistry = "http://127.0.0.1:8337";

struct CliConfig {
  std::string registry = kDefaultRegistry;
  std::optional<std::string> token;
  /// Forge table for archive downloads; built-in table when unset.
  std::optional<std::filesystem::path> forges_file;
};

/// $WOTIFY_CONFIG, else $XDG_CONFIG_HOME/wotify/config.json, else
/// $HOME/.config/wotify/config.json. nullopt when none can be formed.
std::optional<std::filesystem::path> config_path(const EnvLookup& env);

/// Missing file: defaults. WOTIFY_REGISTRY and WOTIFY_TOKEN override the
/// file. Throws std::invalid_argument for a malformed file.
CliConfig load_cli_config(const EnvLookup& env);

} // namespace wotforge::cli
