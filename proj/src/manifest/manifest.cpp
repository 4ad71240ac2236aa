#include "wotforge/manifest/manifest.hpp"

#include <filesystem>

namespace wotforge::manifest {

namespace {

void check_nonempty_string(ValidationReport& report, const Json& value, const std::string& path) {
  if (!value.is_string()) {
    report.add(path, "type", "expected a string");
  } else if (value.get_ref<const std::string&>().empty()) {
    report.add(path, "minLength", "must not be empty");
  }
}

void check_members(ValidationReport& report, const Json& object, const std::string& path,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional) {
  for (const char* key : required) {
    if (!object.contains(key)) {
      report.add(pointer_append(path, key), "required", std::string(key) + " is required");
    }
  }
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) {
      report.add(pointer_append(path, key), "unexpectedField", "unknown member \"" + key + "\"");
    }
  }
}

bool is_relative_inside(const std::string& text) {
  std::filesystem::path p(text);
  if (p.is_absolute()) return false;
  for (const auto& part : p) {
    if (part == "..") return false;
  }
  return true;
}

} // namespace

ValidationReport validate_manifest(const Json& doc) {
  ValidationReport report;
  if (!doc.is_object()) {
    report.add("", "type", "manifest must be a JSON object");
    return report;
  }
  check_members(report, doc, "", {"manifestVersion", "name", "scripts"},
                {"prerequisites", "workdir"});

  if (auto it = doc.find("manifestVersion"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() != kManifestVersion) {
      report.add("/manifestVersion", "const",
                 "manifestVersion must be " + std::to_string(kManifestVersion));
    }
  }
  if (auto it = doc.find("name"); it != doc.end()) check_nonempty_string(report, *it, "/name");

  if (auto it = doc.find("scripts"); it != doc.end()) {
    if (!it->is_object()) {
      report.add("/scripts", "type", "expected an object");
    } else {
      check_members(report, *it, "/scripts", {"install"}, {"check", "uninstall"});
      for (const auto& [key, value] : it->items()) {
        if (key == "install" || key == "check" || key == "uninstall") {
          check_nonempty_string(report, value, pointer_append("/scripts", key));
        }
      }
    }
  }

  if (auto it = doc.find("prerequisites"); it != doc.end()) {
    if (!it->is_array()) {
      report.add("/prerequisites", "type", "expected an array");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& entry = (*it)[i];
        auto path = pointer_append("/prerequisites", i);
        if (!entry.is_object()) {
          report.add(path, "type", "expected an object");
          continue;
        }
        check_members(report, entry, path, {"tool", "probe", "hint"}, {});
        for (const char* key : {"tool", "probe", "hint"}) {
          if (auto field = entry.find(key); field != entry.end()) {
            check_nonempty_string(report, *field, pointer_append(path, key));
          }
        }
      }
    }
  }

  if (auto it = doc.find("workdir"); it != doc.end()) {
    check_nonempty_string(report, *it, "/workdir");
    if (it->is_string() && !it->get_ref<const std::string&>().empty() &&
        !is_relative_inside(it->get<std::string>())) {
      report.add("/workdir", "relativePath", "workdir must stay inside the source tree");
    }
  }
  return report;
}

std::variant<InstallManifest, ValidationReport> parse_manifest(const Json& doc) {
  auto report = validate_manifest(doc);
  if (!report.valid()) return report;

  InstallManifest m;
  m.manifest_version = doc.at("manifestVersion").get<int>();
  m.name = doc.at("name").get<std::string>();
  const auto& scripts = doc.at("scripts");
  m.scripts.install = scripts.at("install").get<std::string>();
  if (scripts.contains("check")) m.scripts.check = scripts.at("check").get<std::string>();
  if (scripts.contains("uninstall")) m.scripts.uninstall = scripts.at("uninstall").get<std::string>();
  if (auto it = doc.find("prerequisites"); it != doc.end()) {
    for (const auto& entry : *it) {
      m.prerequisites.push_back(Prerequisite{entry.at("tool").get<std::string>(),
                                             entry.at("probe").get<std::string>(),
                                             entry.at("hint").get<std::string>()});
    }
  }
  if (auto it = doc.find("workdir"); it != doc.end()) m.workdir = it->get<std::string>();
  return m;
}

Json serialize(const InstallManifest& m) {
  Json scripts{{"install", m.scripts.install}};
  if (m.scripts.check) scripts["check"] = *m.scripts.check;
  if (m.scripts.uninstall) scripts["uninstall"] = *m.scripts.uninstall;
  Json doc{{"manifestVersion", m.manifest_version}, {"name", m.name}, {"scripts", scripts}};
  if (!m.prerequisites.empty()) {
    Json list = Json::array();
    for (const auto& p : m.prerequisites) {
      list.push_back(Json{{"tool", p.tool}, {"probe", p.probe}, {"hint", p.hint}});
    }
    doc["prerequisites"] = std::move(list);
  }
  if (m.workdir) doc["workdir"] = *m.workdir;
  return doc;
}

} // namespace wotforge::manifest
