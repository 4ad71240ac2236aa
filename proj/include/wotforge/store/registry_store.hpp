#pragma once

#include "wotforge/core/model.hpp"
#include "wotforge/store/append_log.hpp"
#include "wotforge/store/search.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace wotforge::store {

struct StoreOptions {
  std::filesystem::path data_dir;
  SearchWeights weights;
  /// Log entries appended before an automatic compaction; 0 disables it.
  std::size_t compact_threshold = 10000;
  /// fsync after every append. Only tests turn this off.
  bool sync = true;
};

enum class DeleteOutcome { Deleted, NotFound, Forbidden };

struct RatingSummary {
  double average = 0.0;
  std::uint64_t count = 0;
};

/// Embedded document store for projects, users, tokens and stats.
///
/// On-disk layout (see docs/storage-format.md): projects.log, ratings.log
/// and users.log hold newline-delimited {op, id, doc, ts} envelopes;
/// compaction folds each into a matching *.snapshot file. State and the
/// search index are rebuilt from snapshot + log when the store opens.
///
/// One writer at a time (internal mutex); readers work on an immutable
/// snapshot and never block writers.
class RegistryStore {
public:
  explicit RegistryStore(StoreOptions options);
  ~RegistryStore();
  RegistryStore(const RegistryStore&) = delete;
  RegistryStore& operator=(const RegistryStore&) = delete;

  /// Stores a validated, canonical record under a fresh id
  /// (slug(name)-xxxxxx). Server-managed fields are (re)set here; owner
  /// is taken from the record.
  std::string put_project(ProjectRecord record);
  std::optional<ProjectRecord> get_project(const std::string& id) const;
  DeleteOutcome delete_project(const std::string& id, const std::string& requester);
  std::size_t project_count() const;

  SearchResult search(const SearchQuery& query) const;

  std::optional<std::uint64_t> record_download(const std::string& id);
  /// Throws std::out_of_range unless 1 <= stars <= 5. nullopt: no such project.
  std::optional<RatingSummary> record_rating(const std::string& id, int stars,
                                             const std::string& user_id);

  /// Assigns an id when user.id is empty. nullopt if the username is taken.
  std::optional<UserAccount> put_user(UserAccount user);
  std::optional<UserAccount> get_user_by_name(const std::string& username) const;
  std::optional<UserAccount> get_user(const std::string& id) const;
  void put_token(const ApiToken& token);
  /// The token's owner, or nullopt for unknown tokens.
  std::optional<ApiToken> resolve_token(const std::string& token) const;

  /// Folds the logs into snapshots and truncates them.
  void compact();

  const StoreOptions& options() const { return options_; }

private:
  struct State;
  struct Logs;

  std::shared_ptr<const State> snapshot() const;
  void publish(std::shared_ptr<const State> next);
  void load();
  void after_append();
  void compact_locked();
  std::string fresh_project_id(const State& state, const std::string& name) const;

  StoreOptions options_;
  int lock_fd_ = -1;
  std::unique_ptr<Logs> logs_;
  std::shared_ptr<const State> state_;
  std::mutex writer_;
  std::size_t appended_ = 0;
};

} // namespace wotforge::store
