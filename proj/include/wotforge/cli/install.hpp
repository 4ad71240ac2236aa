#pragma once

#include "wotforge/core/json.hpp"
#include "wotforge/manifest/manifest.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wotforge::cli {

enum class StepKind { Probe, FetchSource, RunScript, WriteTd };

std::string_view to_string(StepKind kind);

struct PlanStep {
  StepKind kind = StepKind::Probe;
  std::string detail;
  std::string command; // probe and runScript only
  std::string hint;    // probe only
  std::filesystem::path cwd;
};

/// Everything install will do, computed before any side effect.
struct InstallPlan {
  std::vector<PlanStep> steps;
  bool dry_run = false;

  Json to_json() const;
};

struct InstallTarget {
  std::string project_id;
  std::string project_name;
  std::filesystem::path dest;        // where the source tree lands
  std::filesystem::path probe_cwd;   // invocation directory
  std::size_t file_count = 0;
};

/// Probes (prerequisites, then scripts.check), fetchSource, runScript,
/// writeTd.
InstallPlan build_install_plan(const manifest::InstallManifest& manifest, const InstallTarget& target,
                               bool dry_run);

/// Name of the TD file written next to the installed sources.
std::string td_file_name(const std::string& project_id);

} // namespace wotforge::cli
