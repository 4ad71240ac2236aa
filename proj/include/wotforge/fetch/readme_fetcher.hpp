#pragma once

#include "wotforge/core/model.hpp"
#include "wotforge/fetch/forge_table.hpp"
#include "wotforge/fetch/transport.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace wotforge::fetch {

enum class ReadmeSource { ReadmeUri, RepoGuess, FallbackDescription };

std::string_view to_string(ReadmeSource source);

struct ReadmeResult {
  ReadmeSource source = ReadmeSource::FallbackDescription;
  std::string body;
  std::string uri; // empty for the fallback
};

struct FetchCacheEntry {
  std::string uri;
  int status = 0;
  std::string body;
  std::chrono::system_clock::time_point fetched_at;
  std::optional<std::string> etag;
};

struct FetcherOptions {
  std::chrono::seconds ttl{300};
  std::chrono::milliseconds timeout{5000};
  std::size_t max_body_bytes = 512 * 1024;
  ForgeTable forges = ForgeTable::defaults();
  std::function<std::chrono::system_clock::time_point()> clock = [] {
    return std::chrono::system_clock::now();
  };
};

inline constexpr std::string_view kTruncationMarker =
    "\n\n<!-- wotforge: README truncated at 512 KiB -->\n";

/// Resolves a project's README: explicit readme URI, then raw-content
/// guesses derived from the repository link, then the long description.
/// Upstream failures never escape; every call returns a body.
///
/// Responses (including failures) are cached per exact URI for the TTL;
/// concurrent lookups of one URI share a single upstream request.
class ReadmeFetcher {
public:
  ReadmeFetcher(std::shared_ptr<HttpTransport> transport, FetcherOptions options = {});

  ReadmeResult fetch_readme(const ProjectRecord& record);

  /// Cached GET of one URI, exposed for tests and diagnostics.
  FetchCacheEntry get(const std::string& uri);

  std::size_t cache_size() const;

private:
  FetchCacheEntry fetch_upstream(const std::string& uri, const std::optional<FetchCacheEntry>& stale);

  std::shared_ptr<HttpTransport> transport_;
  FetcherOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, FetchCacheEntry> cache_;
  std::map<std::string, std::shared_future<FetchCacheEntry>> in_flight_;
};

} // namespace wotforge::fetch
