#include "wotforge/cli/app.hpp"

#include "wotforge/cli/archive.hpp"
#include "wotforge/cli/install.hpp"
#include "wotforge/cli/registry_client.hpp"
#include "wotforge/core/model.hpp"
#include "wotforge/fetch/forge_table.hpp"
#include "wotforge/manifest/manifest.hpp"
#include "wotforge/td/submission.hpp"
#include "wotforge/td/template.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>
#include <variant>

namespace wotforge::cli {

namespace {

/// Aborts a command with an exit code; message goes to stderr.
struct CliFailure {
  int code;
  std::string message;
};

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  general error (bad arguments, local validation, I/O)\n"
    "  2  registry unreachable or HTTP error\n"
    "  3  TD written with unbound placeholders\n"
    "  4  a prerequisite probe failed\n"
    "  5  missing or invalid wotify.json\n"
    "  6  project is a TD template, not installable code\n"
    "  7  ambiguous project name\n"
    "  N  install script exit status, passed through";

struct GlobalOptions {
  std::string registry;
  bool json = false;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kExitError, "cannot read " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw CliFailure{kExitError, "cannot write " + path.string()};
}

void print_issues(std::ostream& err, const Json& issues) {
  for (const auto& issue : issues) {
    auto path = issue.value("path", std::string{});
    err << "  " << (path.empty() ? "/" : path) << ": " << issue.value("message", std::string{}) << " ["
        << issue.value("code", std::string{}) << "]\n";
  }
}

std::string pad(const std::string& text, std::size_t width) {
  auto len = utf8_length(text);
  return len >= width ? text : text + std::string(width - len, ' ');
}

std::string format_rating(const Json& value) {
  if (!value.is_number()) return "-";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(1) << value.get<double>();
  return ss.str();
}

class Session {
public:
  Session(CliContext& ctx, GlobalOptions globals) : ctx_(ctx), globals_(std::move(globals)) {
    try {
      config_ = load_cli_config(ctx_.env);
    } catch (const std::invalid_argument& e) {
      throw CliFailure{kExitError, std::string("config: ") + e.what()};
    }
    if (!globals_.registry.empty()) config_.registry = globals_.registry;
  }

  RegistryClient client(std::optional<std::string> token = std::nullopt) {
    try {
      return RegistryClient(config_.registry, std::move(token));
    } catch (const std::invalid_argument& e) {
      throw CliFailure{kExitError, e.what()};
    }
  }

  const CliConfig& config() const { return config_; }
  bool json() const { return globals_.json; }
  std::ostream& out() { return ctx_.out; }
  std::ostream& err() { return ctx_.err; }
  CliContext& ctx() { return ctx_; }

  /// Exact id first, then a unique exact name across all search pages.
  Json resolve(RegistryClient& client, const std::string& id_or_name) {
    if (auto record = client.project(id_or_name)) return *record;
    std::vector<Json> matches;
    std::size_t offset = 0;
    for (;;) {
      auto page = client.search({{"q", id_or_name},
                                 {"limit", std::to_string(store_max_limit)},
                                 {"offset", std::to_string(offset)}});
      const auto& hits = page.at("hits");
      for (const auto& hit : hits) {
        if (hit.at("name") == id_or_name) matches.push_back(hit);
      }
      offset += hits.size();
      if (hits.empty() || offset >= page.at("total").get<std::size_t>()) break;
    }
    if (matches.empty()) throw CliFailure{kExitError, "no project with id or name \"" + id_or_name + "\""};
    if (matches.size() > 1) {
      std::string message = "\"" + id_or_name + "\" names " + std::to_string(matches.size()) +
                            " projects; use one of these ids:";
      for (const auto& m : matches) message += "\n  " + m.at("projectId").get<std::string>();
      throw CliFailure{kExitAmbiguous, message};
    }
    auto record = client.project(matches.front().at("projectId").get<std::string>());
    if (!record) throw CliFailure{kExitError, "project vanished while resolving \"" + id_or_name + "\""};
    return *record;
  }

  static constexpr std::size_t store_max_limit = 100;

private:
  CliContext& ctx_;
  GlobalOptions globals_;
  CliConfig config_;
};

// ---- search ----

struct SearchArgs {
  std::vector<std::string> terms;
  std::string platform, topic, type, complexity;
  std::size_t limit = 20;
  std::size_t offset = 0;
};

int cmd_search(Session& s, const SearchArgs& a) {
  QueryParams params;
  std::string q;
  for (const auto& t : a.terms) q += (q.empty() ? "" : " ") + t;
  if (!q.empty()) params.emplace_back("q", q);
  if (!a.platform.empty()) params.emplace_back("platform", a.platform);
  if (!a.topic.empty()) params.emplace_back("topic", a.topic);
  if (!a.type.empty()) params.emplace_back("type", a.type);
  if (!a.complexity.empty()) params.emplace_back("complexity", a.complexity);
  params.emplace_back("limit", std::to_string(a.limit));
  params.emplace_back("offset", std::to_string(a.offset));

  auto client = s.client();
  auto page = client.search(params);
  if (s.json()) {
    s.out() << page.dump(2) << '\n';
    return kExitOk;
  }
  const auto& hits = page.at("hits");
  if (hits.empty()) {
    s.out() << "no results\n";
    return kExitOk;
  }
  std::vector<std::array<std::string, 6>> rows{{"NAME", "TYPE", "PLATFORM", "SCORE", "RATING", "ID"}};
  for (const auto& h : hits) {
    rows.push_back({h.at("name").get<std::string>(), h.at("implementationType").get<std::string>(),
                    h.at("platform").get<std::string>(), std::to_string(h.at("score").get<std::uint64_t>()),
                    format_rating(h.value("averageRating", Json())), h.at("projectId").get<std::string>()});
  }
  std::array<std::size_t, 6> width{};
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], utf8_length(row[i]));
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) line += (i + 1 < row.size() ? pad(row[i], width[i] + 2) : row[i]);
    s.out() << line << '\n';
  }
  auto total = page.at("total").get<std::size_t>();
  if (total > hits.size()) {
    s.out() << "(" << hits.size() << " of " << total << " shown; use --offset/--limit for more)\n";
  }
  return kExitOk;
}

// ---- show ----

Json td_summary(const Json& td) {
  Json summary{{"title", td.value("title", std::string{})}};
  for (const char* key : {"properties", "actions", "events"}) {
    Json names = Json::array();
    if (auto it = td.find(key); it != td.end() && it->is_object()) {
      for (const auto& [name, _] : it->items()) names.push_back(name);
    }
    summary[key] = std::move(names);
  }
  auto scan = td::scan_placeholders(td);
  summary["placeholders"] = Json(std::vector<std::string>(scan.names.begin(), scan.names.end()));
  return summary;
}

std::string join(const Json& list) {
  std::string out;
  for (const auto& item : list) out += (out.empty() ? "" : ", ") + item.get<std::string>();
  return out.empty() ? "-" : out;
}

int cmd_show(Session& s, const std::string& id_or_name) {
  auto client = s.client();
  auto record = s.resolve(client, id_or_name);
  auto id = record.at("id").get<std::string>();
  auto readme = client.readme(id);
  auto summary = td_summary(record.value("td", Json::object()));
  if (s.json()) {
    s.out() << Json{{"project", record},
                    {"readme", {{"source", readme.source}, {"body", readme.body}}},
                    {"td", summary}}
                   .dump(2)
            << '\n';
    return kExitOk;
  }
  auto& o = s.out();
  o << record.at("name").get<std::string>() << "  (" << id << ")\n"
    << record.at("shortDescription").get<std::string>() << "\n\n"
    << "type:       " << record.at("implementationType").get<std::string>() << '\n'
    << "platform:   " << record.at("platform").get<std::string>() << '\n'
    << "complexity: " << record.at("complexity").get<std::string>() << '\n'
    << "topics:     " << join(record.at("topic")) << '\n'
    << "tags:       " << join(record.at("tags")) << '\n';
  if (record.contains("github")) o << "repository: " << record["github"].get<std::string>() << '\n';
  auto stats = record.value("stats", Json::object());
  o << "downloads:  " << stats.value("downloads", 0) << '\n'
    << "rating:     " << format_rating(record.value("averageRating", Json())) << " ("
    << stats.value("ratingCount", 0) << " ratings)\n\n";
  o << "== README (" << readme.source << ") ==\n" << readme.body;
  if (readme.body.empty() || readme.body.back() != '\n') o << '\n';
  o << "\n== Thing Description ==\n"
    << "title:        " << summary["title"].get<std::string>() << '\n'
    << "properties:   " << join(summary["properties"]) << '\n'
    << "actions:      " << join(summary["actions"]) << '\n'
    << "events:       " << join(summary["events"]) << '\n'
    << "placeholders: " << join(summary["placeholders"]) << '\n';
  return kExitOk;
}

// ---- td ----

struct TdArgs {
  std::string project;
  std::string out;
  std::vector<std::string> binds;
};

int cmd_td(Session& s, const TdArgs& a) {
  static const std::regex bind_rule("([A-Z0-9_]+)=(.*)");
  td::Bindings bindings;
  for (const auto& b : a.binds) {
    std::smatch m;
    if (!std::regex_match(b, m, bind_rule)) {
      throw CliFailure{kExitError, "--bind expects NAME=VALUE with NAME in [A-Z0-9_], got \"" + b + "\""};
    }
    bindings[m[1]] = m[2];
  }

  auto client = s.client();
  auto record = s.resolve(client, a.project);
  auto id = record.at("id").get<std::string>();
  auto body = client.td(id);
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error&) {
    throw CliFailure{kExitRegistry, "registry sent a TD that is not JSON"};
  }

  auto scan = td::scan_placeholders(doc);
  if (!scan.malformed.empty()) {
    throw CliFailure{kExitError, "the TD template has malformed placeholders; cannot bind it"};
  }
  std::vector<std::string> unbound, unused;
  for (const auto& name : scan.names) {
    if (!bindings.count(name)) unbound.push_back(name);
  }
  for (const auto& [name, _] : bindings) {
    if (!scan.names.count(name)) unused.push_back(name);
  }
  for (const auto& name : unused) s.err() << "wotify: warning: --bind " << name << " matches no placeholder\n";

  std::string output = body;
  bool instantiated = false;
  if (!scan.names.empty() && unbound.empty()) {
    try {
      output = td::instantiate_template(td::TdTemplate(doc), bindings).dump(2);
      instantiated = true;
    } catch (const td::TemplateError& e) {
      s.err() << "wotify: " << e.what() << '\n';
      print_issues(s.err(), e.report().to_json()["issues"]);
      return kExitError;
    }
  }

  if (a.out.empty()) {
    s.out() << output;
  } else {
    write_file(a.out, output);
    if (s.json()) {
      s.out() << Json{{"id", id}, {"file", a.out}, {"instantiated", instantiated}, {"unbound", unbound}}.dump(2)
              << '\n';
    } else {
      s.err() << "wrote " << a.out << (instantiated ? " (instantiated)" : "") << '\n';
    }
  }
  if (!unbound.empty()) {
    std::string names;
    for (const auto& n : unbound) names += (names.empty() ? "" : ", ") + n;
    s.err() << "wotify: unbound placeholders: " << names << "\n"
            << "  supply them with --bind NAME=VALUE\n";
    return kExitUnbound;
  }
  return kExitOk;
}

// ---- install ----

struct InstallArgs {
  std::string project;
  bool dry_run = false;
  bool yes = false;
  std::string source;
  std::string dest;
};

/// Source tree obtained before planning: an archive in memory or a local directory.
struct Source {
  std::optional<SourceArchive> archive;
  std::optional<std::filesystem::path> directory;
  std::string origin;

  std::optional<std::string> read(const std::string& name) const {
    if (archive) return archive->read_file(name);
    auto path = *directory / name;
    if (!std::filesystem::is_regular_file(path)) return std::nullopt;
    return read_file(path);
  }

  std::size_t entry_count() const {
    if (archive) return archive->entries().size();
    std::size_t n = 0;
    for (auto it = std::filesystem::recursive_directory_iterator(*directory);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
      ++n;
    }
    return n;
  }

  void materialize(const std::filesystem::path& dest) const {
    if (archive) return archive->extract_to(dest);
    std::filesystem::copy(*directory, dest,
                          std::filesystem::copy_options::recursive | std::filesystem::copy_options::copy_symlinks);
  }
};

fetch::ForgeTable forge_table(const Session& s) {
  if (!s.config().forges_file) return fetch::ForgeTable::defaults();
  try {
    return fetch::ForgeTable::from_json(Json::parse(read_file(*s.config().forges_file)));
  } catch (const std::exception& e) {
    throw CliFailure{kExitError, "forge table " + s.config().forges_file->string() + ": " + e.what()};
  }
}

Source obtain_source(Session& s, const InstallArgs& a, const Json& record) {
  Source src;
  if (!a.source.empty()) {
    std::filesystem::path path(a.source);
    src.origin = path.string();
    if (std::filesystem::is_directory(path)) {
      src.directory = path;
    } else {
      src.archive = SourceArchive::from_tar_gz(read_file(path));
    }
    return src;
  }
  if (!record.contains("github")) {
    throw CliFailure{kExitError, "the project lists no repository; pass --source DIR|ARCHIVE"};
  }
  auto repo = record["github"].get<std::string>();
  auto candidates = forge_table(s).archive_candidates(repo);
  if (candidates.empty()) {
    throw CliFailure{kExitError, "cannot derive an archive URL from " + repo + "; pass --source DIR|ARCHIVE"};
  }
  if (!s.ctx().transport) throw CliFailure{kExitError, "no HTTP transport available for downloads"};
  std::string tried;
  for (const auto& url : candidates) {
    fetch::HttpRequest req{url, {{"User-Agent", std::string(fetch::kUserAgent)}}, std::chrono::seconds(120)};
    auto res = fetch::get_following_redirects(*s.ctx().transport, req);
    if (res.ok()) {
      src.archive = SourceArchive::from_tar_gz(res.body);
      src.origin = url;
      return src;
    }
    tried += "\n  " + url + " -> " + (res.status ? "HTTP " + std::to_string(res.status) : res.error);
  }
  throw CliFailure{kExitError, "could not download the source archive; tried:" + tried +
                                   "\npass --source DIR|ARCHIVE to install from a local copy"};
}

manifest::InstallManifest read_manifest(const Source& src) {
  auto text = src.read(manifest::kManifestFileName);
  if (!text) {
    throw CliFailure{kExitNoManifest, std::string("no ") + manifest::kManifestFileName +
                                          " at the root of the source tree (" + src.origin +
                                          "); the project does not support wotify install"};
  }
  Json doc;
  try {
    doc = Json::parse(*text);
  } catch (const Json::parse_error& e) {
    throw CliFailure{kExitNoManifest, std::string(manifest::kManifestFileName) + " is not valid JSON: " + e.what()};
  }
  auto parsed = manifest::parse_manifest(doc);
  if (auto* report = std::get_if<ValidationReport>(&parsed)) {
    std::string message = std::string(manifest::kManifestFileName) + " is invalid:";
    for (const auto& issue : report->issues()) {
      message += "\n  " + (issue.path.empty() ? std::string("/") : issue.path) + ": " + issue.message;
    }
    throw CliFailure{kExitNoManifest, message};
  }
  return std::get<manifest::InstallManifest>(std::move(parsed));
}

std::filesystem::path make_install_dir(const std::string& project_id) {
  auto pattern = (std::filesystem::temp_directory_path() / ("wotify-" + project_id + "-XXXXXX")).string();
  std::vector<char> buffer(pattern.begin(), pattern.end());
  buffer.push_back('\0');
  if (!mkdtemp(buffer.data())) throw CliFailure{kExitError, "cannot create a temporary install directory"};
  return std::filesystem::path(buffer.data());
}

void print_plan(std::ostream& out, const InstallPlan& plan) {
  out << (plan.dry_run ? "install plan (dry run, nothing will be executed):\n" : "install plan:\n");
  int n = 1;
  for (const auto& step : plan.steps) {
    out << "  " << n++ << ". " << to_string(step.kind) << ": " << step.detail;
    if (!step.command.empty()) out << "\n       $ " << step.command;
    if (step.kind == StepKind::RunScript) out << "\n       in " << step.cwd.string();
    out << '\n';
  }
}

int cmd_install(Session& s, const InstallArgs& a) {
  auto client = s.client();
  auto record = s.resolve(client, a.project);
  auto id = record.at("id").get<std::string>();
  auto name = record.at("name").get<std::string>();
  if (record.at("implementationType") == "template") {
    throw CliFailure{kExitTemplateInstall, "\"" + name +
                                               "\" is a TD template, not installable code; download it with "
                                               "`wotify td " + id + " --bind NAME=VALUE --out FILE`"};
  }

  Source src;
  try {
    src = obtain_source(s, a, record);
  } catch (const ArchiveError& e) {
    throw CliFailure{kExitError, std::string("source archive: ") + e.what()};
  }
  auto manifest = read_manifest(src);
  if (manifest.name != name && manifest.name != id) {
    s.err() << "wotify: warning: wotify.json names \"" << manifest.name << "\", registry project is \"" << name
            << "\"\n";
  }

  std::filesystem::path dest;
  if (!a.dest.empty()) {
    dest = std::filesystem::absolute(a.dest);
    if (std::filesystem::exists(dest) &&
        (!std::filesystem::is_directory(dest) || !std::filesystem::is_empty(dest))) {
      throw CliFailure{kExitError, "--dest " + dest.string() + " exists and is not an empty directory"};
    }
  }

  InstallTarget target{id, name, dest.empty() ? std::filesystem::path("<new temporary directory>") : dest,
                       std::filesystem::current_path(), src.entry_count()};
  auto plan = build_install_plan(manifest, target, a.dry_run);
  if (a.dry_run) {
    if (s.json()) {
      auto doc = plan.to_json();
      doc["project"] = id;
      doc["source"] = src.origin;
      s.out() << doc.dump(2) << '\n';
    } else {
      print_plan(s.out(), plan);
    }
    return kExitOk;
  }
  if (!s.json()) print_plan(s.err(), plan);

  if (s.ctx().confirm && !a.yes &&
      !s.ctx().confirm("Run the install script of \"" + name + "\" (" + manifest.scripts.install + ")?")) {
    throw CliFailure{kExitError, "aborted"};
  }

  std::map<std::string, std::string> env{{"WOTIFY_PROJECT_NAME", name}, {"WOTIFY_PROJECT_ID", id}};
  auto& runner = *s.ctx().runner;
  for (const auto& step : plan.steps) {
    if (step.kind != StepKind::Probe) continue;
    if (runner.run(step.command, step.cwd, env) != 0) {
      throw CliFailure{kExitProbeFailed, step.detail + " failed (" + step.command + ")\n  hint: " + step.hint};
    }
  }

  if (dest.empty()) {
    dest = make_install_dir(id);
  } else {
    std::filesystem::create_directories(dest);
  }
  try {
    src.materialize(dest);
  } catch (const std::exception& e) {
    throw CliFailure{kExitError, "extracting sources into " + dest.string() + ": " + e.what()};
  }
  auto workdir = manifest.workdir ? dest / *manifest.workdir : dest;
  if (!std::filesystem::is_directory(workdir)) {
    throw CliFailure{kExitNoManifest, "workdir " + *manifest.workdir + " does not exist in the source tree"};
  }

  int status = runner.run(manifest.scripts.install, workdir, env);
  if (status != 0) {
    s.err() << "wotify: install script exited with status " << status << '\n';
    return status;
  }

  auto td_path = dest / td_file_name(id);
  bool td_written = false;
  try {
    write_file(td_path, client.td(id));
    td_written = true;
  } catch (const ClientError& e) {
    s.err() << "wotify: warning: could not fetch the TD (" << e.what() << ")\n";
  } catch (const CliFailure& e) {
    s.err() << "wotify: warning: " << e.message << '\n';
  }

  if (s.json()) {
    auto doc = plan.to_json();
    doc["project"] = id;
    doc["dest"] = dest.string();
    doc["td"] = td_written ? Json(td_path.string()) : Json(nullptr);
    s.out() << doc.dump(2) << '\n';
  } else {
    s.out() << "installed " << name << " into " << dest.string() << '\n';
  }
  return kExitOk;
}

// ---- publish ----

int cmd_publish(Session& s, const std::string& file, const std::string& token_flag) {
  std::string text;
  if (file == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    text = read_file(file);
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CliFailure{kExitError, file + " is not valid JSON: " + e.what()};
  }
  auto outcome = td::ingest_submission(doc);
  if (auto* report = std::get_if<ValidationReport>(&outcome)) {
    if (s.json()) s.out() << report->to_json().dump(2) << '\n';
    s.err() << "wotify: " << file << " is not a valid project submission:\n";
    print_issues(s.err(), report->to_json()["issues"]);
    return kExitError;
  }

  auto token = token_flag.empty() ? s.config().token : std::optional<std::string>(token_flag);
  if (!token) throw CliFailure{kExitError, "publishing needs a token: --token, WOTIFY_TOKEN or the config file"};
  auto client = s.client(token);
  try {
    auto id = client.publish(doc);
    if (s.json()) {
      s.out() << Json{{"id", id}}.dump(2) << '\n';
    } else {
      s.out() << id << '\n';
    }
  } catch (const ClientError& e) {
    s.err() << "wotify: " << e.what() << '\n';
    if (e.body() && e.body()->contains("issues")) print_issues(s.err(), (*e.body())["issues"]);
    return kExitRegistry;
  }
  return kExitOk;
}

template <class E> std::vector<std::string> wire_names() {
  std::vector<std::string> out;
  for (const auto& [v, name] : EnumNames<E>::values) out.emplace_back(name);
  return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args, CliContext& ctx) {
  CLI::App app{"wotify: search, inspect, download and install Web of Things projects", "wotify"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions globals;
  app.add_option("--registry", globals.registry, "Registry base URL (default from config, then " +
                                                     std::string(kDefaultRegistry) + ")");
  app.add_flag("--json", globals.json, "Machine-readable JSON output");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Search projects by name, tags and description");
  search_cmd->add_option("terms", search.terms, "Search terms");
  search_cmd->add_option("--platform", search.platform)->check(CLI::IsMember(wire_names<Platform>()));
  search_cmd->add_option("--topic", search.topic)->check(CLI::IsMember(wire_names<Topic>()));
  search_cmd->add_option("--type", search.type)->check(CLI::IsMember(wire_names<ImplementationType>()));
  search_cmd->add_option("--complexity", search.complexity)->check(CLI::IsMember(wire_names<Complexity>()));
  search_cmd->add_option("--limit", search.limit, "Hits per page (1-100)")->check(CLI::Range(1, 100));
  search_cmd->add_option("--offset", search.offset, "Hits to skip");

  std::string show_target;
  auto* show_cmd = app.add_subcommand("show", "Show a project's details, README and TD summary");
  show_cmd->add_option("project", show_target, "Project id or exact name")->required();

  TdArgs td_args;
  auto* td_cmd = app.add_subcommand("td", "Download a project's Thing Description");
  td_cmd->add_option("project", td_args.project, "Project id or exact name")->required();
  td_cmd->add_option("--out,-o", td_args.out, "Write to FILE instead of stdout");
  td_cmd->add_option("--bind,-b", td_args.binds, "Placeholder binding NAME=VALUE (repeatable)");

  InstallArgs install_args;
  auto* install_cmd = app.add_subcommand("install", "Install a code project using its wotify.json manifest");
  install_cmd->add_option("project", install_args.project, "Project id or exact name")->required();
  install_cmd->add_flag("--dry-run", install_args.dry_run, "Print the plan; execute nothing");
  install_cmd->add_flag("--yes,-y", install_args.yes, "Do not ask before running scripts");
  install_cmd->add_option("--source", install_args.source, "Local source directory or .tar.gz instead of the forge");
  install_cmd->add_option("--dest", install_args.dest, "Install into this (empty or new) directory");

  std::string publish_file, publish_token;
  auto* publish_cmd = app.add_subcommand("publish", "Validate and publish a project document");
  publish_cmd->add_option("file", publish_file, "Project JSON file, or - for stdin")->required();
  publish_cmd->add_option("--token", publish_token, "API token (default: WOTIFY_TOKEN or config)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    ctx.out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    ctx.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ctx.err << "wotify: " << e.what() << "\nRun `wotify --help` for usage.\n";
    return kExitError;
  }

  try {
    Session session(ctx, globals);
    if (*search_cmd) return cmd_search(session, search);
    if (*show_cmd) return cmd_show(session, show_target);
    if (*td_cmd) return cmd_td(session, td_args);
    if (*install_cmd) return cmd_install(session, install_args);
    if (*publish_cmd) return cmd_publish(session, publish_file, publish_token);
  } catch (const CliFailure& f) {
    ctx.err << "wotify: " << f.message << '\n';
    return f.code;
  } catch (const ClientError& e) {
    ctx.err << "wotify: " << e.what() << '\n';
    return kExitRegistry;
  } catch (const std::exception& e) {
    ctx.err << "wotify: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

} // namespace wotforge::cli
