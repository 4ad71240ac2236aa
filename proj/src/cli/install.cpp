#include "wotforge/cli/install.hpp"

namespace wotforge::cli {

std::string_view to_string(StepKind kind) {
  switch (kind) {
  case StepKind::Probe: return "probe";
  case StepKind::FetchSource: return "fetchSource";
  case StepKind::RunScript: return "runScript";
  case StepKind::WriteTd: return "writeTd";
  }
  return {};
}

Json InstallPlan::to_json() const {
  Json steps_json = Json::array();
  for (const auto& s : steps) {
    Json step{{"kind", to_string(s.kind)}, {"detail", s.detail}};
    if (!s.command.empty()) step["command"] = s.command;
    if (!s.hint.empty()) step["hint"] = s.hint;
    if (!s.cwd.empty()) step["cwd"] = s.cwd.string();
    steps_json.push_back(std::move(step));
  }
  return Json{{"dryRun", dry_run}, {"steps", std::move(steps_json)}};
}

std::string td_file_name(const std::string& project_id) { return project_id + ".td.json"; }

InstallPlan build_install_plan(const manifest::InstallManifest& manifest, const InstallTarget& target,
                               bool dry_run) {
  InstallPlan plan;
  plan.dry_run = dry_run;
  for (const auto& pre : manifest.prerequisites) {
    plan.steps.push_back({StepKind::Probe, "prerequisite " + pre.tool, pre.probe, pre.hint, target.probe_cwd});
  }
  if (manifest.scripts.check) {
    plan.steps.push_back({StepKind::Probe, "scripts.check", *manifest.scripts.check,
                          "the project's check script failed", target.probe_cwd});
  }
  plan.steps.push_back({StepKind::FetchSource,
                        "extract " + std::to_string(target.file_count) + " entries into " + target.dest.string(),
                        {}, {}, {}});
  auto workdir = manifest.workdir ? target.dest / *manifest.workdir : target.dest;
  plan.steps.push_back({StepKind::RunScript, "scripts.install", manifest.scripts.install, {}, workdir});
  plan.steps.push_back({StepKind::WriteTd, (target.dest / td_file_name(target.project_id)).string(), {}, {}, {}});
  return plan;
}

} // namespace wotforge::cli
