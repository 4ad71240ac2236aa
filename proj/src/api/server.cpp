#include "wotforge/api/server.hpp"

#include "wotforge/store/crypto.hpp"
#include "wotforge/td/submission.hpp"

#include <httplib.h>

#include <charconv>
#include <iostream>
#include <mutex>
#include <regex>
#include <unordered_map>

namespace wotforge::api {

namespace {

constexpr const char* kJson = "application/json";

std::string_view status_code_name(int status) {
  switch (status) {
  case 400: return "badRequest";
  case 401: return "unauthorized";
  case 403: return "forbidden";
  case 404: return "notFound";
  case 405: return "methodNotAllowed";
  case 409: return "conflict";
  case 413: return "payloadTooLarge";
  case 415: return "unsupportedMediaType";
  case 422: return "validationFailed";
  case 429: return "rateLimited";
  default: return status >= 500 ? "internal" : "error";
  }
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string message,
                std::optional<Json> issues = std::nullopt) {
  ApiError error{status, std::string(status_code_name(status)), std::move(message), std::move(issues)};
  send_json(res, status, error.to_json());
}

std::optional<std::size_t> parse_size(const std::string& text) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

/// Fixed one-minute windows per client address.
class RateLimiter {
public:
  explicit RateLimiter(unsigned per_minute) : per_minute_(per_minute) {}

  bool admit(const std::string& client) {
    if (per_minute_ == 0) return true;
    auto now = std::chrono::steady_clock::now();
    std::lock_guard lock(mutex_);
    auto& window = windows_[client];
    if (now - window.start >= std::chrono::minutes(1)) window = {now, 0};
    if (window.count >= per_minute_) return false;
    ++window.count;
    return true;
  }

private:
  struct Window {
    std::chrono::steady_clock::time_point start{};
    unsigned count = 0;
  };
  unsigned per_minute_;
  std::mutex mutex_;
  std::unordered_map<std::string, Window> windows_;
};

ValidationReport validate_credentials(const Json& body, bool check_rules) {
  ValidationReport report;
  if (!body.is_object()) {
    report.add("", "type", "expected a JSON object");
    return report;
  }
  static const std::regex username_rule("[A-Za-z0-9_.-]{3,32}");
  for (const char* key : {"username", "password"}) {
    auto it = body.find(key);
    auto path = pointer_append("", key);
    if (it == body.end()) {
      report.add(path, "required", std::string(key) + " is required");
    } else if (!it->is_string()) {
      report.add(path, "type", "expected a string");
    }
  }
  for (const auto& [key, value] : body.items()) {
    if (key != "username" && key != "password") {
      report.add(pointer_append("", key), "unexpectedField", "unknown member \"" + key + "\"");
    }
  }
  if (!check_rules || !report.valid()) return report;
  const auto& username = body["username"].get_ref<const std::string&>();
  if (!std::regex_match(username, username_rule)) {
    report.add("/username", "pattern", "3 to 32 characters from A-Z a-z 0-9 _ . -");
  }
  if (utf8_length(body["password"].get_ref<const std::string&>()) < 8) {
    report.add("/password", "minLength", "must be at least 8 characters");
  }
  return report;
}

} // namespace

Json ApiError::to_json() const {
  Json doc{{"status", status}, {"code", code}, {"message", message}};
  if (issues) doc["issues"] = *issues;
  return doc;
}

struct RegistryServer::Impl {
  ServerConfig config;
  std::shared_ptr<store::RegistryStore> store;
  std::shared_ptr<fetch::ReadmeFetcher> fetcher;
  RateLimiter limiter;
  httplib::Server http;
  bool bound = false;

  Impl(ServerConfig c, std::shared_ptr<store::RegistryStore> s, std::shared_ptr<fetch::ReadmeFetcher> f)
      : config(std::move(c)), store(std::move(s)), fetcher(std::move(f)),
        limiter(config.rate_limit_per_minute) {
    install_middleware();
    install_routes();
  }

  std::optional<ApiToken> authenticate(const httplib::Request& req) const {
    auto header = req.get_header_value("Authorization");
    constexpr std::string_view scheme = "Bearer ";
    if (header.size() <= scheme.size() || header.compare(0, scheme.size(), scheme) != 0) {
      return std::nullopt;
    }
    return store->resolve_token(trim(std::string_view(header).substr(scheme.size())));
  }

  /// Sends 401 and returns nullopt unless the request carries a valid token.
  std::optional<ApiToken> require_auth(const httplib::Request& req, httplib::Response& res) const {
    auto token = authenticate(req);
    if (!token) send_error(res, 401, "a valid bearer token is required");
    return token;
  }

  static std::optional<Json> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
      return Json::parse(req.body);
    } catch (const Json::parse_error& e) {
      send_error(res, 400, std::string("malformed JSON: ") + e.what());
      return std::nullopt;
    }
  }

  void install_middleware() {
    http.set_payload_max_length(config.max_body_bytes);
    http.set_default_headers({{kApiVersionHeader, "1"}});

    http.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (limiter.admit(req.remote_addr)) return httplib::Server::HandlerResponse::Unhandled;
      res.set_header("Retry-After", "60");
      send_error(res, 429, "too many requests");
      return httplib::Server::HandlerResponse::Handled;
    });

    http.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      if (!config.ui_origin) return;
      res.set_header("Access-Control-Allow-Origin", *config.ui_origin);
      res.set_header("Vary", "Origin");
      res.set_header("Access-Control-Expose-Headers",
                     std::string(kReadmeSourceHeader) + ", " + kReadmeFallbackHeader + ", " +
                         kApiVersionHeader);
    });

    // Responses httplib produced on its own (unknown route, oversize body)
    // arrive here without a body.
    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      std::string message = res.status == 404   ? "no such resource"
                            : res.status == 413 ? "request body too large"
                                                : httplib::status_message(res.status);
      send_error(res, res.status, message);
      return httplib::Server::HandlerResponse::Handled;
    });

    http.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string message = "internal error";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            message += ": ";
            message += e.what();
          } catch (...) {
          }
          send_error(res, 500, message);
        });

    if (config.access_log) {
      http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        std::cerr << req.remote_addr << ' ' << req.method << ' ' << req.path << ' ' << res.status
                  << '\n';
      });
    }
  }

  void install_routes() {
    using Req = const httplib::Request&;
    using Res = httplib::Response&;

    http.Options(R"(/api/.*)", [this](Req, Res res) {
      res.status = 204;
      if (config.ui_origin) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
        res.set_header("Access-Control-Max-Age", "600");
      }
    });

    http.Get("/api/health", [this](Req, Res res) {
      send_json(res, 200, Json{{"status", "ok"}, {"projects", store->project_count()}});
    });

    http.Post("/api/users", [this](Req req, Res res) { create_user(req, res); });
    http.Post("/api/tokens", [this](Req req, Res res) { issue_token(req, res); });
    http.Post("/api/projects", [this](Req req, Res res) { publish(req, res); });
    http.Get("/api/projects", [this](Req req, Res res) { search(req, res); });
    http.Get(R"(/api/projects/([^/]+))", [this](Req req, Res res) { show(req, res); });
    http.Delete(R"(/api/projects/([^/]+))", [this](Req req, Res res) { remove(req, res); });
    http.Get(R"(/api/projects/([^/]+)/td)", [this](Req req, Res res) { td(req, res); });
    http.Get(R"(/api/projects/([^/]+)/readme)", [this](Req req, Res res) { readme(req, res); });
    http.Post(R"(/api/projects/([^/]+)/rating)", [this](Req req, Res res) { rate(req, res); });
  }

  void create_user(const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    auto report = validate_credentials(*body, true);
    if (!report.valid()) return send_error(res, 422, "invalid account", report.to_json()["issues"]);
    UserAccount account;
    account.username = (*body)["username"].get<std::string>();
    account.password_digest = store::hash_password((*body)["password"].get<std::string>());
    auto stored = store->put_user(std::move(account));
    if (!stored) return send_error(res, 409, "username already taken");
    send_json(res, 201, public_json(*stored));
  }

  void issue_token(const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    auto report = validate_credentials(*body, false);
    if (!report.valid()) return send_error(res, 422, "invalid credentials document", report.to_json()["issues"]);
    auto user = store->get_user_by_name((*body)["username"].get<std::string>());
    if (!user || !store::verify_password(user->password_digest, (*body)["password"].get<std::string>())) {
      return send_error(res, 401, "wrong username or password");
    }
    ApiToken token{store::random_token(), user->id, now_utc()};
    store->put_token(token);
    send_json(res, 201,
              Json{{"token", token.token},
                   {"userId", user->id},
                   {"username", user->username},
                   {"issuedAt", format_timestamp(token.issued_at)}});
  }

  void publish(const httplib::Request& req, httplib::Response& res) {
    auto token = require_auth(req, res);
    if (!token) return;
    auto body = parse_body(req, res);
    if (!body) return;
    auto outcome = td::ingest_submission(*body);
    if (auto* report = std::get_if<ValidationReport>(&outcome)) {
      return send_error(res, 422, "project submission failed validation", report->to_json()["issues"]);
    }
    auto record = std::get<ProjectRecord>(std::move(outcome));
    record.owner = token->user_id;
    auto id = store->put_project(std::move(record));
    res.set_header("Location", "/api/projects/" + id);
    send_json(res, 201, Json{{"id", id}});
  }

  template <class E>
  bool enum_param(const httplib::Request& req, httplib::Response& res, const char* name,
                  std::optional<E>& out) {
    if (!req.has_param(name)) return true;
    auto value = req.get_param_value(name);
    out = enum_from_string<E>(value);
    if (!out) send_error(res, 400, std::string("unknown ") + name + " \"" + value + "\"");
    return out.has_value();
  }

  void search(const httplib::Request& req, httplib::Response& res) {
    auto query = store::SearchQuery::from_text(req.get_param_value("q"));
    if (!enum_param(req, res, "platform", query.platform) ||
        !enum_param(req, res, "topic", query.topic) ||
        !enum_param(req, res, "type", query.implementation_type) ||
        !enum_param(req, res, "complexity", query.complexity)) {
      return;
    }
    if (req.has_param("limit")) {
      auto limit = parse_size(req.get_param_value("limit"));
      if (!limit || *limit == 0 || *limit > store::kMaxLimit) {
        return send_error(res, 400, "limit must be an integer from 1 to " + std::to_string(store::kMaxLimit));
      }
      query.limit = *limit;
    }
    if (req.has_param("offset")) {
      auto offset = parse_size(req.get_param_value("offset"));
      if (!offset) return send_error(res, 400, "offset must be a non-negative integer");
      query.offset = *offset;
    }
    auto result = store->search(query);
    Json hits = Json::array();
    for (const auto& hit : result.hits) hits.push_back(to_json(hit));
    send_json(res, 200,
              Json{{"total", result.total}, {"limit", query.limit}, {"offset", query.offset}, {"hits", hits}});
  }

  void show(const httplib::Request& req, httplib::Response& res) {
    auto record = store->get_project(req.matches[1]);
    if (!record) return send_error(res, 404, "no such project");
    auto doc = encode(*record);
    auto average = record->stats.average_rating();
    doc["averageRating"] = average ? Json(*average) : Json(nullptr);
    send_json(res, 200, doc);
  }

  void td(const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    if (!store->record_download(id)) return send_error(res, 404, "no such project");
    auto record = store->get_project(id);
    if (!record) return send_error(res, 404, "no such project");
    res.status = 200;
    res.set_content(record->td.dump(2), "application/td+json");
  }

  void readme(const httplib::Request& req, httplib::Response& res) {
    auto record = store->get_project(req.matches[1]);
    if (!record) return send_error(res, 404, "no such project");
    auto result = fetcher->fetch_readme(*record);
    res.status = 200;
    res.set_header(kReadmeSourceHeader, std::string(fetch::to_string(result.source)));
    if (result.source == fetch::ReadmeSource::FallbackDescription) {
      res.set_header(kReadmeFallbackHeader, "1");
    }
    res.set_content(result.body, "text/markdown; charset=utf-8");
  }

  void rate(const httplib::Request& req, httplib::Response& res) {
    auto token = require_auth(req, res);
    if (!token) return;
    auto body = parse_body(req, res);
    if (!body) return;
    ValidationReport report;
    if (!body->is_object()) {
      report.add("", "type", "expected a JSON object");
    } else if (!body->contains("stars")) {
      report.add("/stars", "required", "stars is required");
    } else if (!(*body)["stars"].is_number_integer()) {
      report.add("/stars", "type", "stars must be an integer");
    } else {
      auto stars = (*body)["stars"].get<long long>();
      if (stars < 1) report.add("/stars", "minimum", "stars must be at least 1");
      if (stars > 5) report.add("/stars", "maximum", "stars must be at most 5");
    }
    if (!report.valid()) return send_error(res, 422, "invalid rating", report.to_json()["issues"]);
    auto summary = store->record_rating(req.matches[1], (*body)["stars"].get<int>(), token->user_id);
    if (!summary) return send_error(res, 404, "no such project");
    send_json(res, 200, Json{{"average", summary->average}, {"count", summary->count}});
  }

  void remove(const httplib::Request& req, httplib::Response& res) {
    auto token = require_auth(req, res);
    if (!token) return;
    switch (store->delete_project(req.matches[1], token->user_id)) {
    case store::DeleteOutcome::Deleted: res.status = 204; return;
    case store::DeleteOutcome::NotFound: return send_error(res, 404, "no such project");
    case store::DeleteOutcome::Forbidden: return send_error(res, 403, "only the owner may delete a project");
    }
  }
};

RegistryServer::RegistryServer(ServerConfig config, std::shared_ptr<store::RegistryStore> store,
                               std::shared_ptr<fetch::ReadmeFetcher> fetcher)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(store), std::move(fetcher))) {}

RegistryServer::~RegistryServer() { stop(); }

int RegistryServer::bind() {
  const auto& c = impl_->config;
  int port = c.port == 0 ? impl_->http.bind_to_any_port(c.host)
                         : (impl_->http.bind_to_port(c.host, c.port) ? c.port : -1);
  if (port < 0) {
    throw std::runtime_error("cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  impl_->bound = true;
  return port;
}

void RegistryServer::listen() {
  if (!impl_->bound) throw std::logic_error("RegistryServer::listen before bind");
  impl_->http.listen_after_bind();
}

void RegistryServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void RegistryServer::wait_until_ready() { impl_->http.wait_until_ready(); }

} // namespace wotforge::api
