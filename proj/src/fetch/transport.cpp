#include "wotforge/fetch/transport.hpp"

#include "wotforge/fetch/url.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

namespace wotforge::fetch {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_redirect(int status) {
  return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

} // namespace

std::string HttpResponse::header(const std::string& lowercase_name) const {
  auto it = headers.find(lowercase_name);
  return it == headers.end() ? std::string{} : it->second;
}

HttpResponse HttplibTransport::get(const HttpRequest& request) {
  HttpResponse out;
  auto url = parse_url(request.url);
  if (!url || !url->is_http()) {
    out.error = "unsupported URL: " + request.url;
    return out;
  }
  httplib::Client client(url->origin());
  if (!client.is_valid()) {
    out.error = "cannot create client for " + url->origin();
    return out;
  }
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_follow_location(false);

  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);
  auto result = client.Get(url->target, headers);
  if (!result) {
    out.error = httplib::to_string(result.error());
    return out;
  }
  out.status = result->status;
  out.body = std::move(result->body);
  for (const auto& [k, v] : result->headers) out.headers[lower(k)] = v;
  return out;
}

HttpResponse get_following_redirects(HttpTransport& transport, HttpRequest request,
                                     int max_redirects) {
  for (int hop = 0;; ++hop) {
    auto url = parse_url(request.url);
    if (!url || !url->is_http()) {
      HttpResponse refused;
      refused.error = "refusing to fetch non-http(s) URL: " + request.url;
      return refused;
    }
    auto response = transport.get(request);
    auto location = response.header("location");
    if (!is_redirect(response.status) || location.empty() || hop >= max_redirects) return response;
    auto next = resolve_location(*url, location);
    if (!next) {
      HttpResponse refused;
      refused.error = "refusing redirect to " + location;
      return refused;
    }
    request.url = next->str();
  }
}

} // namespace wotforge::fetch
