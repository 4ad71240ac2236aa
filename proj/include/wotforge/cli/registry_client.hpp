#pragma once

#include "wotforge/core/json.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace httplib {
class Client;
}

namespace wotforge::cli {

/// A failed registry call. status 0: the registry could not be reached.
class ClientError : public std::runtime_error {
public:
  ClientError(int status, std::string message, std::optional<Json> body = std::nullopt)
      : std::runtime_error(std::move(message)), status_(status), body_(std::move(body)) {}
  int status() const { return status_; }
  /// The ApiError document, when the server sent one.
  const std::optional<Json>& body() const { return body_; }

private:
  int status_;
  std::optional<Json> body_;
};

struct ReadmeDoc {
  std::string body;
  std::string source;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;

/// Thin blocking client for the registry API.
class RegistryClient {
public:
  /// base_url: scheme://host[:port][/prefix]. Throws std::invalid_argument.
  explicit RegistryClient(const std::string& base_url, std::optional<std::string> token = std::nullopt,
                          std::chrono::seconds timeout = std::chrono::seconds(30));
  ~RegistryClient();
  RegistryClient(RegistryClient&&) noexcept;

  Json search(const QueryParams& params);
  /// nullopt on 404.
  std::optional<Json> project(const std::string& id);
  /// Raw /td body; the request counts as a download.
  std::string td(const std::string& id);
  ReadmeDoc readme(const std::string& id);
  /// Returns the new id. Throws ClientError (422 carries the issues).
  std::string publish(const Json& submission);

  const std::string& base_url() const { return base_url_; }

private:
  std::string path(const std::string& suffix) const;

  std::string base_url_;
  std::string prefix_;
  std::optional<std::string> token_;
  std::unique_ptr<httplib::Client> http_;
};

/// Percent-encodes one path segment.
std::string encode_segment(std::string_view segment);

} // namespace wotforge::cli
