#include "wotforge/cli/registry_client.hpp"

#include "wotforge/fetch/url.hpp"

#include <httplib.h>

namespace wotforge::cli {

namespace {

[[noreturn]] void fail(const httplib::Result& result, const std::string& what) {
  if (!result) {
    throw ClientError(0, what + ": registry unreachable (" + httplib::to_string(result.error()) + ")");
  }
  std::optional<Json> body;
  std::string message = what + ": HTTP " + std::to_string(result->status);
  try {
    body = Json::parse(result->body);
    if (body->contains("message")) message += ": " + (*body)["message"].get<std::string>();
  } catch (const Json::exception&) {
    body.reset();
  }
  throw ClientError(result->status, message, body);
}

Json parse_json(const httplib::Result& result, const std::string& what) {
  try {
    return Json::parse(result->body);
  } catch (const Json::parse_error&) {
    throw ClientError(result->status, what + ": registry sent malformed JSON");
  }
}

} // namespace

std::string encode_segment(std::string_view segment) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : segment) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

RegistryClient::RegistryClient(const std::string& base_url, std::optional<std::string> token,
                               std::chrono::seconds timeout)
    : base_url_(base_url), token_(std::move(token)) {
  auto url = fetch::parse_url(base_url);
  if (!url || !url->is_http()) throw std::invalid_argument("registry URL must be http(s): " + base_url);
  prefix_ = url->target.substr(0, url->target.find('?'));
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  http_ = std::make_unique<httplib::Client>(url->origin());
  http_->set_connection_timeout(timeout);
  http_->set_read_timeout(timeout);
  http_->set_write_timeout(timeout);
  if (token_) http_->set_bearer_token_auth(*token_);
}

RegistryClient::~RegistryClient() = default;
RegistryClient::RegistryClient(RegistryClient&&) noexcept = default;

std::string RegistryClient::path(const std::string& suffix) const { return prefix_ + suffix; }

Json RegistryClient::search(const QueryParams& params) {
  httplib::Params p;
  for (const auto& [k, v] : params) p.emplace(k, v);
  auto r = http_->Get(path("/api/projects"), p, httplib::Headers{});
  if (!r || r->status != 200) fail(r, "search");
  return parse_json(r, "search");
}

std::optional<Json> RegistryClient::project(const std::string& id) {
  auto r = http_->Get(path("/api/projects/" + encode_segment(id)));
  if (r && r->status == 404) return std::nullopt;
  if (!r || r->status != 200) fail(r, "fetch project");
  return parse_json(r, "fetch project");
}

std::string RegistryClient::td(const std::string& id) {
  auto r = http_->Get(path("/api/projects/" + encode_segment(id) + "/td"));
  if (!r || r->status != 200) fail(r, "download TD");
  return std::move(r->body);
}

ReadmeDoc RegistryClient::readme(const std::string& id) {
  auto r = http_->Get(path("/api/projects/" + encode_segment(id) + "/readme"));
  if (!r || r->status != 200) fail(r, "fetch README");
  return {std::move(r->body), r->get_header_value("X-WoTify-Readme-Source")};
}

std::string RegistryClient::publish(const Json& submission) {
  auto r = http_->Post(path("/api/projects"), submission.dump(), "application/json");
  if (!r || r->status != 201) fail(r, "publish");
  return parse_json(r, "publish").at("id").get<std::string>();
}

} // namespace wotforge::cli
