#include "wotforge/fetch/forge_table.hpp"

#include "wotforge/fetch/url.hpp"

#include <stdexcept>

namespace wotforge::fetch {

namespace {

struct RepoRef {
  std::string origin;
  std::string host;
  std::string owner;
  std::string repo;
};

std::optional<RepoRef> parse_repository(const std::string& repository) {
  auto url = parse_url(repository);
  if (!url || !url->is_http()) return std::nullopt;
  auto path = url->target.substr(0, url->target.find('?'));
  std::vector<std::string> parts;
  std::size_t start = 1;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string::npos) end = path.size();
    if (end > start) parts.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  if (parts.size() < 2) return std::nullopt;
  auto repo = parts[1];
  if (repo.size() > 4 && repo.compare(repo.size() - 4, 4, ".git") == 0) repo.resize(repo.size() - 4);
  return RepoRef{url->origin(), url->host, parts[0], repo};
}

std::string expand(std::string tmpl, const RepoRef& ref, const std::string& branch,
                   const std::string& file) {
  const std::pair<const char*, const std::string*> vars[] = {
      {"{origin}", &ref.origin}, {"{owner}", &ref.owner}, {"{repo}", &ref.repo},
      {"{branch}", &branch},     {"{file}", &file}};
  for (const auto& [name, value] : vars) {
    std::string key(name);
    for (auto at = tmpl.find(key); at != std::string::npos; at = tmpl.find(key, at + value->size())) {
      tmpl.replace(at, key.size(), *value);
    }
  }
  return tmpl;
}

const ForgeRule* rule_for(const ForgeTable& table, const std::string& host) {
  if (auto it = table.forges.find(host); it != table.forges.end()) return &it->second;
  if (auto it = table.forges.find("*"); it != table.forges.end()) return &it->second;
  return nullptr;
}

std::vector<std::string> string_list(const Json& doc, const char* key) {
  const auto& value = doc.at(key);
  if (!value.is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) throw std::invalid_argument(std::string(key) + " must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

} // namespace

ForgeTable ForgeTable::defaults() {
  ForgeTable table;
  table.forges = {
      {"github.com",
       {"https://raw.githubusercontent.com/{owner}/{repo}/{branch}/{file}",
        "https://github.com/{owner}/{repo}/archive/refs/heads/{branch}.tar.gz"}},
      {"gitlab.com",
       {"https://gitlab.com/{owner}/{repo}/-/raw/{branch}/{file}",
        "https://gitlab.com/{owner}/{repo}/-/archive/{branch}/{repo}-{branch}.tar.gz"}},
      {"bitbucket.org",
       {"https://bitbucket.org/{owner}/{repo}/raw/{branch}/{file}",
        "https://bitbucket.org/{owner}/{repo}/get/{branch}.tar.gz"}},
      {"codeberg.org",
       {"https://codeberg.org/{owner}/{repo}/raw/branch/{branch}/{file}",
        "https://codeberg.org/{owner}/{repo}/archive/{branch}.tar.gz"}},
      {"*", {"", "{origin}/{owner}/{repo}/archive/refs/heads/{branch}.tar.gz"}},
  };
  return table;
}

ForgeTable ForgeTable::from_json(const Json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("forge table must be an object");
  ForgeTable table = defaults();
  if (doc.contains("branches")) table.branches = string_list(doc, "branches");
  if (doc.contains("readmeFiles")) table.readme_files = string_list(doc, "readmeFiles");
  if (auto it = doc.find("forges"); it != doc.end()) {
    if (!it->is_object()) throw std::invalid_argument("forges must be an object");
    table.forges.clear();
    for (const auto& [host, rule] : it->items()) {
      if (!rule.is_object()) throw std::invalid_argument("forge rule for " + host + " must be an object");
      table.forges[host] = ForgeRule{rule.value("readme", std::string{}), rule.value("archive", std::string{})};
    }
  }
  return table;
}

Json ForgeTable::to_json() const {
  Json forges_doc = Json::object();
  for (const auto& [host, rule] : forges) forges_doc[host] = {{"readme", rule.readme}, {"archive", rule.archive}};
  return Json{{"branches", branches}, {"readmeFiles", readme_files}, {"forges", forges_doc}};
}

std::vector<std::string> ForgeTable::readme_candidates(const std::string& repository) const {
  std::vector<std::string> out;
  auto ref = parse_repository(repository);
  if (!ref) return out;
  const auto* rule = rule_for(*this, ref->host);
  if (!rule || rule->readme.empty()) return out;
  for (const auto& branch : branches) {
    for (const auto& file : readme_files) out.push_back(expand(rule->readme, *ref, branch, file));
  }
  return out;
}

std::vector<std::string> ForgeTable::archive_candidates(const std::string& repository) const {
  std::vector<std::string> out;
  auto ref = parse_repository(repository);
  if (!ref) return out;
  const auto* rule = rule_for(*this, ref->host);
  if (!rule || rule->archive.empty()) return out;
  for (const auto& branch : branches) out.push_back(expand(rule->archive, *ref, branch, ""));
  return out;
}

} // namespace wotforge::fetch
