#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace wotforge::fetch {

struct Url {
  std::string scheme; // lowercase
  std::string host;   // lowercase
  std::optional<int> port;
  std::string target; // path + query, always starts with '/'

  /// scheme://host[:port]
  std::string origin() const;
  std::string str() const { return origin() + target; }
  bool is_http() const { return scheme == "http" || scheme == "https"; }
};

/// Parses absolute http-style URLs (scheme://authority/path?query). User
/// info and fragments are dropped.
std::optional<Url> parse_url(std::string_view text);

/// Resolves a Location header value against the URL it came from.
std::optional<Url> resolve_location(const Url& base, std::string_view location);

} // namespace wotforge::fetch
