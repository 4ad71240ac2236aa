#include "wotforge/fetch/readme_fetcher.hpp"

#include "wotforge/fetch/url.hpp"

namespace wotforge::fetch {

namespace {

/// Cuts at max bytes without splitting a UTF-8 sequence.
std::string truncate_utf8(std::string body, std::size_t max) {
  if (body.size() <= max) return body;
  std::size_t cut = max;
  while (cut > 0 && (static_cast<unsigned char>(body[cut]) & 0xC0) == 0x80) --cut;
  body.resize(cut);
  body += kTruncationMarker;
  return body;
}

} // namespace

std::string_view to_string(ReadmeSource source) {
  switch (source) {
  case ReadmeSource::ReadmeUri: return "readmeUri";
  case ReadmeSource::RepoGuess: return "repoGuess";
  case ReadmeSource::FallbackDescription: return "fallbackDescription";
  }
  return "fallbackDescription";
}

ReadmeFetcher::ReadmeFetcher(std::shared_ptr<HttpTransport> transport, FetcherOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {}

std::size_t ReadmeFetcher::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

FetchCacheEntry ReadmeFetcher::fetch_upstream(const std::string& uri,
                                              const std::optional<FetchCacheEntry>& stale) {
  HttpRequest request;
  request.url = uri;
  request.timeout = options_.timeout;
  request.headers["User-Agent"] = kUserAgent;
  request.headers["Accept"] = "text/markdown, text/plain;q=0.9, */*;q=0.1";
  if (stale && stale->etag) request.headers["If-None-Match"] = *stale->etag;

  HttpResponse response;
  try {
    response = get_following_redirects(*transport_, request);
  } catch (const std::exception& e) {
    response.status = 0;
    response.error = e.what();
  }

  auto now = options_.clock();
  if (response.status == 304 && stale) {
    FetchCacheEntry refreshed = *stale;
    refreshed.fetched_at = now;
    return refreshed;
  }
  FetchCacheEntry entry;
  entry.uri = uri;
  entry.status = response.status;
  entry.fetched_at = now;
  if (response.ok()) {
    entry.body = truncate_utf8(std::move(response.body), options_.max_body_bytes);
    if (auto etag = response.header("etag"); !etag.empty()) entry.etag = etag;
  }
  return entry;
}

FetchCacheEntry ReadmeFetcher::get(const std::string& uri) {
  std::unique_lock lock(mutex_);
  std::optional<FetchCacheEntry> stale;
  if (auto it = cache_.find(uri); it != cache_.end()) {
    if (options_.clock() - it->second.fetched_at < options_.ttl) return it->second;
    stale = it->second;
  }
  if (auto it = in_flight_.find(uri); it != in_flight_.end()) {
    auto shared = it->second;
    lock.unlock();
    return shared.get();
  }
  std::promise<FetchCacheEntry> promise;
  in_flight_[uri] = promise.get_future().share();
  lock.unlock();

  auto entry = fetch_upstream(uri, stale);

  lock.lock();
  cache_[uri] = entry;
  in_flight_.erase(uri);
  lock.unlock();
  promise.set_value(entry);
  return entry;
}

ReadmeResult ReadmeFetcher::fetch_readme(const ProjectRecord& record) {
  if (record.readme) {
    auto url = parse_url(*record.readme);
    if (url && url->is_http()) {
      auto entry = get(*record.readme);
      if (entry.status >= 200 && entry.status < 300) {
        return ReadmeResult{ReadmeSource::ReadmeUri, std::move(entry.body), *record.readme};
      }
    }
  }
  if (record.github) {
    for (const auto& candidate : options_.forges.readme_candidates(*record.github)) {
      auto entry = get(candidate);
      if (entry.status >= 200 && entry.status < 300) {
        return ReadmeResult{ReadmeSource::RepoGuess, std::move(entry.body), candidate};
      }
    }
  }
  return ReadmeResult{ReadmeSource::FallbackDescription, record.long_description, ""};
}

} // namespace wotforge::fetch
