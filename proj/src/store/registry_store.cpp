#include "wotforge/store/registry_store.hpp"

#include "wotforge/store/crypto.hpp"

#include <algorithm>
#include <atomic>
#include <fcntl.h>
#include <set>
#include <stdexcept>
#include <sys/file.h>
#include <unistd.h>
#include <unordered_map>

namespace wotforge::store {

namespace fs = std::filesystem;

namespace {

using Ratings = std::map<std::string, int>; // user id -> stars

struct ProjectEntry {
  std::shared_ptr<const ProjectRecord> record;
  std::uint64_t downloads = 0;
  std::shared_ptr<const Ratings> ratings = std::make_shared<Ratings>();

  Stats stats() const {
    Stats s;
    s.downloads = downloads;
    s.rating_count = ratings->size();
    for (const auto& [user, stars] : *ratings) s.rating_sum += static_cast<std::uint64_t>(stars);
    return s;
  }

  ProjectRecord materialize() const {
    ProjectRecord copy = *record;
    copy.stats = stats();
    return copy;
  }
};

using ProjectMap = std::map<std::string, ProjectEntry>;

struct Identity {
  std::map<std::string, UserAccount> users;         // by id
  std::map<std::string, std::string> ids_by_name;   // username -> id
  std::map<std::string, ApiToken> tokens;           // token digest -> token (digest in .token)
};

Json envelope(std::string_view op, const std::string& id, Json doc) {
  return Json{{"op", op}, {"id", id}, {"doc", std::move(doc)}, {"ts", format_timestamp(now_utc())}};
}

std::string require_field(const Json& entry, const char* key) {
  auto it = entry.find(key);
  if (it == entry.end() || !it->is_string()) {
    throw StoreError(std::string("log entry lacks string member ") + key + ": " + entry.dump());
  }
  return it->get<std::string>();
}

Json user_doc(const UserAccount& user) {
  return Json{{"username", user.username},
              {"passwordDigest", user.password_digest},
              {"createdAt", format_timestamp(user.created_at)}};
}

Json token_doc(const ApiToken& token) {
  return Json{{"userId", token.user_id}, {"issuedAt", format_timestamp(token.issued_at)}};
}

Timestamp timestamp_member(const Json& doc, const char* key) {
  auto ts = parse_timestamp(doc.value(key, std::string{}));
  if (!ts) throw StoreError(std::string("bad timestamp in ") + key);
  return *ts;
}

} // namespace

struct RegistryStore::State {
  std::shared_ptr<const ProjectMap> projects = std::make_shared<ProjectMap>();
  std::shared_ptr<const InvertedIndex> index = std::make_shared<InvertedIndex>();
  std::shared_ptr<const Identity> identity = std::make_shared<Identity>();
};

struct RegistryStore::Logs {
  AppendLog projects;
  AppendLog ratings;
  AppendLog users;

  Logs(const fs::path& dir, bool sync)
      : projects(dir / "projects.log", sync),
        ratings(dir / "ratings.log", sync),
        users(dir / "users.log", sync) {}
};

RegistryStore::RegistryStore(StoreOptions options) : options_(std::move(options)) {
  fs::create_directories(options_.data_dir);
  auto lock_path = options_.data_dir / "LOCK";
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0 || ::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    if (lock_fd_ >= 0) ::close(lock_fd_);
    throw StoreError("data directory " + options_.data_dir.string() + " is locked by another store");
  }
  try {
    load();
    logs_ = std::make_unique<Logs>(options_.data_dir, options_.sync);
  } catch (...) {
    ::close(lock_fd_);
    throw;
  }
}

RegistryStore::~RegistryStore() {
  logs_.reset();
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

std::shared_ptr<const RegistryStore::State> RegistryStore::snapshot() const {
  return std::atomic_load(&state_);
}

void RegistryStore::publish(std::shared_ptr<const State> next) {
  std::atomic_store(&state_, std::move(next));
}

void RegistryStore::load() {
  const auto& dir = options_.data_dir;
  ProjectMap projects;
  auto apply_project = [&](const Json& entry) {
    auto op = require_field(entry, "op");
    auto id = require_field(entry, "id");
    if (op == "put") {
      auto record = decode_project(entry.at("doc"));
      ProjectEntry e;
      e.downloads = record.stats.downloads;
      e.record = std::make_shared<const ProjectRecord>(std::move(record));
      projects[id] = std::move(e);
    } else if (op == "delete") {
      projects.erase(id);
    } else if (op == "download") {
      if (auto it = projects.find(id); it != projects.end()) {
        it->second.downloads = entry.at("doc").at("downloads").get<std::uint64_t>();
      }
    } else {
      throw StoreError("unknown projects.log op " + op);
    }
  };
  for (const auto& e : read_entries(dir / "projects.snapshot")) apply_project(e);
  for (const auto& e : read_entries(dir / "projects.log")) apply_project(e);

  std::unordered_map<std::string, Ratings> ratings;
  auto apply_rating = [&](const Json& entry) {
    if (require_field(entry, "op") != "rate") throw StoreError("unknown ratings.log op");
    auto id = require_field(entry, "id");
    if (!projects.count(id)) return;
    const auto& doc = entry.at("doc");
    ratings[id][doc.at("userId").get<std::string>()] = doc.at("stars").get<int>();
  };
  for (const auto& e : read_entries(dir / "ratings.snapshot")) apply_rating(e);
  for (const auto& e : read_entries(dir / "ratings.log")) apply_rating(e);
  for (auto& [id, r] : ratings) projects[id].ratings = std::make_shared<const Ratings>(std::move(r));

  auto identity = std::make_shared<Identity>();
  auto apply_user = [&](const Json& entry) {
    auto op = require_field(entry, "op");
    auto id = require_field(entry, "id");
    const auto& doc = entry.at("doc");
    if (op == "user") {
      UserAccount user{id, doc.at("username").get<std::string>(),
                       doc.at("passwordDigest").get<std::string>(), timestamp_member(doc, "createdAt")};
      identity->ids_by_name[user.username] = id;
      identity->users[id] = std::move(user);
    } else if (op == "token") {
      identity->tokens[id] =
          ApiToken{id, doc.at("userId").get<std::string>(), timestamp_member(doc, "issuedAt")};
    } else {
      throw StoreError("unknown users.log op " + op);
    }
  };
  for (const auto& e : read_entries(dir / "users.snapshot")) apply_user(e);
  for (const auto& e : read_entries(dir / "users.log")) apply_user(e);

  auto index = std::make_shared<InvertedIndex>();
  for (const auto& [id, entry] : projects) index->add(id, *entry.record);

  auto state = std::make_shared<State>();
  state->projects = std::make_shared<const ProjectMap>(std::move(projects));
  state->index = std::move(index);
  state->identity = std::move(identity);
  publish(std::move(state));
}

std::string RegistryStore::fresh_project_id(const State& state, const std::string& name) const {
  auto base = slugify(name);
  for (;;) {
    auto id = base + "-" + random_lowercase_id(6);
    if (!state.projects->count(id)) return id;
  }
}

std::string RegistryStore::put_project(ProjectRecord record) {
  std::lock_guard lock(writer_);
  auto current = snapshot();

  record.id = fresh_project_id(*current, record.name);
  record.created_at = record.updated_at = now_utc();
  record.stats = Stats{};
  logs_->projects.append(envelope("put", record.id, encode(record)));

  auto next = std::make_shared<State>(*current);
  auto projects = std::make_shared<ProjectMap>(*current->projects);
  auto index = std::make_shared<InvertedIndex>(*current->index);
  index->add(record.id, record);
  auto id = record.id;
  ProjectEntry entry;
  entry.record = std::make_shared<const ProjectRecord>(std::move(record));
  (*projects)[id] = std::move(entry);
  next->projects = std::move(projects);
  next->index = std::move(index);
  publish(std::move(next));
  after_append();
  return id;
}

std::optional<ProjectRecord> RegistryStore::get_project(const std::string& id) const {
  auto state = snapshot();
  auto it = state->projects->find(id);
  if (it == state->projects->end()) return std::nullopt;
  return it->second.materialize();
}

std::size_t RegistryStore::project_count() const { return snapshot()->projects->size(); }

DeleteOutcome RegistryStore::delete_project(const std::string& id, const std::string& requester) {
  std::lock_guard lock(writer_);
  auto current = snapshot();
  auto it = current->projects->find(id);
  if (it == current->projects->end()) return DeleteOutcome::NotFound;
  if (it->second.record->owner != requester) return DeleteOutcome::Forbidden;

  logs_->projects.append(envelope("delete", id, nullptr));
  auto next = std::make_shared<State>(*current);
  auto projects = std::make_shared<ProjectMap>(*current->projects);
  projects->erase(id);
  auto index = std::make_shared<InvertedIndex>(*current->index);
  index->remove(id);
  next->projects = std::move(projects);
  next->index = std::move(index);
  publish(std::move(next));
  after_append();
  return DeleteOutcome::Deleted;
}

std::optional<std::uint64_t> RegistryStore::record_download(const std::string& id) {
  std::lock_guard lock(writer_);
  auto current = snapshot();
  auto it = current->projects->find(id);
  if (it == current->projects->end()) return std::nullopt;

  auto count = it->second.downloads + 1;
  logs_->projects.append(envelope("download", id, Json{{"downloads", count}}));
  auto next = std::make_shared<State>(*current);
  auto projects = std::make_shared<ProjectMap>(*current->projects);
  (*projects)[id].downloads = count;
  next->projects = std::move(projects);
  publish(std::move(next));
  after_append();
  return count;
}

std::optional<RatingSummary> RegistryStore::record_rating(const std::string& id, int stars,
                                                          const std::string& user_id) {
  if (stars < 1 || stars > 5) throw std::out_of_range("stars must be between 1 and 5");
  std::lock_guard lock(writer_);
  auto current = snapshot();
  auto it = current->projects->find(id);
  if (it == current->projects->end()) return std::nullopt;

  logs_->ratings.append(envelope("rate", id, Json{{"userId", user_id}, {"stars", stars}}));
  auto ratings = std::make_shared<Ratings>(*it->second.ratings);
  (*ratings)[user_id] = stars;
  auto next = std::make_shared<State>(*current);
  auto projects = std::make_shared<ProjectMap>(*current->projects);
  (*projects)[id].ratings = ratings;
  auto stats = (*projects)[id].stats();
  next->projects = std::move(projects);
  publish(std::move(next));
  after_append();
  return RatingSummary{*stats.average_rating(), stats.rating_count};
}

SearchResult RegistryStore::search(const SearchQuery& query) const {
  if (query.limit == 0 || query.limit > kMaxLimit) {
    throw std::invalid_argument("limit must be between 1 and " + std::to_string(kMaxLimit));
  }
  auto state = snapshot();
  const auto& projects = *state->projects;

  std::set<std::string> terms(query.terms.begin(), query.terms.end());
  std::vector<std::pair<const ProjectEntry*, std::uint64_t>> candidates;
  if (terms.empty()) {
    for (const auto& [id, entry] : projects) candidates.emplace_back(&entry, 0);
  } else {
    std::unordered_map<std::string, std::uint64_t> scores;
    for (const auto& term : terms) {
      const auto* postings = state->index->postings(term);
      if (!postings) continue;
      for (const auto& [id, mask] : *postings) scores[id] += field_score(mask, options_.weights);
    }
    for (const auto& [id, score] : scores) {
      if (score == 0) continue;
      candidates.emplace_back(&projects.at(id), score);
    }
  }

  SearchResult result;
  for (const auto& [entry, score] : candidates) {
    const auto& r = *entry->record;
    if (query.platform && r.platform != *query.platform) continue;
    if (query.implementation_type && r.implementation_type != *query.implementation_type) continue;
    if (query.complexity && r.complexity != *query.complexity) continue;
    if (query.topic && std::find(r.topic.begin(), r.topic.end(), *query.topic) == r.topic.end()) continue;
    auto stats = entry->stats();
    result.hits.push_back(SearchHit{r.id, r.name, r.short_description, r.implementation_type,
                                    r.platform, score, stats.downloads, stats.average_rating()});
  }
  std::sort(result.hits.begin(), result.hits.end(), hit_order);
  result.total = result.hits.size();

  auto begin = std::min(query.offset, result.hits.size());
  auto end = std::min(begin + query.limit, result.hits.size());
  result.hits = std::vector<SearchHit>(result.hits.begin() + static_cast<std::ptrdiff_t>(begin),
                                       result.hits.begin() + static_cast<std::ptrdiff_t>(end));
  return result;
}

std::optional<UserAccount> RegistryStore::put_user(UserAccount user) {
  std::lock_guard lock(writer_);
  auto current = snapshot();
  if (current->identity->ids_by_name.count(user.username)) return std::nullopt;
  if (user.id.empty()) {
    do {
      user.id = "u-" + random_lowercase_id(12);
    } while (current->identity->users.count(user.id));
  }
  if (user.created_at == Timestamp{}) user.created_at = now_utc();
  logs_->users.append(envelope("user", user.id, user_doc(user)));

  auto identity = std::make_shared<Identity>(*current->identity);
  identity->ids_by_name[user.username] = user.id;
  identity->users[user.id] = user;
  auto next = std::make_shared<State>(*current);
  next->identity = std::move(identity);
  publish(std::move(next));
  after_append();
  return user;
}

std::optional<UserAccount> RegistryStore::get_user_by_name(const std::string& username) const {
  auto state = snapshot();
  auto it = state->identity->ids_by_name.find(username);
  if (it == state->identity->ids_by_name.end()) return std::nullopt;
  return state->identity->users.at(it->second);
}

std::optional<UserAccount> RegistryStore::get_user(const std::string& id) const {
  auto state = snapshot();
  auto it = state->identity->users.find(id);
  if (it == state->identity->users.end()) return std::nullopt;
  return it->second;
}

void RegistryStore::put_token(const ApiToken& token) {
  std::lock_guard lock(writer_);
  auto current = snapshot();
  auto digest = sha256_hex(token.token);
  logs_->users.append(envelope("token", digest, token_doc(token)));

  auto identity = std::make_shared<Identity>(*current->identity);
  identity->tokens[digest] = ApiToken{digest, token.user_id, token.issued_at};
  auto next = std::make_shared<State>(*current);
  next->identity = std::move(identity);
  publish(std::move(next));
  after_append();
}

std::optional<ApiToken> RegistryStore::resolve_token(const std::string& token) const {
  auto state = snapshot();
  auto it = state->identity->tokens.find(sha256_hex(token));
  if (it == state->identity->tokens.end()) return std::nullopt;
  return ApiToken{token, it->second.user_id, it->second.issued_at};
}

void RegistryStore::after_append() {
  ++appended_;
  if (options_.compact_threshold != 0 && appended_ >= options_.compact_threshold) compact_locked();
}

void RegistryStore::compact() {
  std::lock_guard lock(writer_);
  compact_locked();
}

void RegistryStore::compact_locked() {
  auto state = snapshot();
  std::vector<Json> projects;
  std::vector<Json> ratings;
  for (const auto& [id, entry] : *state->projects) {
    projects.push_back(envelope("put", id, encode(entry.materialize())));
    for (const auto& [user, stars] : *entry.ratings) {
      ratings.push_back(envelope("rate", id, Json{{"userId", user}, {"stars", stars}}));
    }
  }
  std::vector<Json> users;
  for (const auto& [id, user] : state->identity->users) users.push_back(envelope("user", id, user_doc(user)));
  for (const auto& [digest, token] : state->identity->tokens) {
    users.push_back(envelope("token", digest, token_doc(token)));
  }

  const auto& dir = options_.data_dir;
  write_snapshot(dir / "projects.snapshot", projects, options_.sync);
  write_snapshot(dir / "ratings.snapshot", ratings, options_.sync);
  write_snapshot(dir / "users.snapshot", users, options_.sync);
  logs_->projects.truncate();
  logs_->ratings.truncate();
  logs_->users.truncate();
  appended_ = 0;
}

} // namespace wotforge::store
