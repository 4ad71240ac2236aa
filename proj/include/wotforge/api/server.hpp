#pragma once

#include "wotforge/api/config.hpp"
#include "wotforge/fetch/readme_fetcher.hpp"
#include "wotforge/store/registry_store.hpp"

#include <memory>
#include <optional>
#include <string>

namespace wotforge::api {

inline constexpr const char* kApiVersionHeader = "X-WoTify-Api";
inline constexpr const char* kReadmeSourceHeader = "X-WoTify-Readme-Source";
inline constexpr const char* kReadmeFallbackHeader = "X-WoTify-Readme-Fallback";

/// Body of every non-2xx response.
struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
  std::optional<Json> issues;

  Json to_json() const;
};

/// The registry's HTTP front: routes, auth, CORS, body cap, rate limit.
/// Handlers hold no state of their own; everything shared lives in the
/// store and the README fetcher, both thread-safe.
class RegistryServer {
public:
  RegistryServer(ServerConfig config, std::shared_ptr<store::RegistryStore> store,
                 std::shared_ptr<fetch::ReadmeFetcher> fetcher);
  ~RegistryServer();
  RegistryServer(const RegistryServer&) = delete;
  RegistryServer& operator=(const RegistryServer&) = delete;

  /// Binds config.host:config.port and returns the bound port.
  /// Throws std::runtime_error when binding fails.
  int bind();
  /// Serves until stop(). Requires bind().
  void listen();
  void stop();
  void wait_until_ready();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace wotforge::api
