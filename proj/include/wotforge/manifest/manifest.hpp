#pragma once

#include "wotforge/core/json.hpp"
#include "wotforge/core/validation_report.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wotforge::manifest {

/// File name of the manifest at the root of a project's source tree.
inline constexpr const char* kManifestFileName = "wotify.json";
inline constexpr int kManifestVersion = 1;

struct Prerequisite {
  std::string tool;
  std::string probe; // command line; expected to be side-effect free
  std::string hint;  // shown to the user when the probe fails

  bool operator==(const Prerequisite&) const = default;
};

struct Scripts {
  std::string install;
  std::optional<std::string> check;
  std::optional<std::string> uninstall;

  bool operator==(const Scripts&) const = default;
};

struct InstallManifest {
  int manifest_version = kManifestVersion;
  std::string name;
  Scripts scripts;
  std::vector<Prerequisite> prerequisites;
  std::optional<std::string> workdir; // relative to the source root

  bool operator==(const InstallManifest&) const = default;
};

ValidationReport validate_manifest(const Json& doc);

std::variant<InstallManifest, ValidationReport> parse_manifest(const Json& doc);

Json serialize(const InstallManifest& manifest);

} // namespace wotforge::manifest
