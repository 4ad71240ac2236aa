#pragma once

#include <chrono>
#include <map>
#include <string>

namespace wotforge::fetch {

inline constexpr const char* kUserAgent = "wotforge-registry/0.1.0";

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::chrono::milliseconds timeout{5000};
};

struct HttpResponse {
  int status = 0; // 0: transport failure, see error
  std::map<std::string, std::string> headers; // lowercase names
  std::string body;
  std::string error;

  bool ok() const { return status >= 200 && status < 300; }
  std::string header(const std::string& lowercase_name) const;
};

/// One outbound GET, no redirect handling.
class HttpTransport {
public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const HttpRequest& request) = 0;
};

/// Plain HTTP/HTTPS client.
class HttplibTransport final : public HttpTransport {
public:
  HttpResponse get(const HttpRequest& request) override;
};

inline constexpr int kMaxRedirects = 3;

/// GET that follows up to max_redirects redirects. Never requests a
/// non-http(s) URL; such targets end as a transport failure.
HttpResponse get_following_redirects(HttpTransport& transport, HttpRequest request,
                                     int max_redirects = kMaxRedirects);

} // namespace wotforge::fetch
