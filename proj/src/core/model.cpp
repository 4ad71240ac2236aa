#include "wotforge/core/model.hpp"

#include <algorithm>
#include <ctime>
#include <cstdio>

namespace wotforge {

namespace {

template <class E> E require_enum(const Json& doc, const char* key) {
  const auto& value = doc.at(key);
  if (!value.is_string()) throw DecodeError(std::string(key) + " must be a string");
  auto parsed = enum_from_string<E>(value.get_ref<const std::string&>());
  if (!parsed) throw DecodeError(std::string(key) + ": unknown value " + value.dump());
  return *parsed;
}

std::string require_string(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw DecodeError(std::string(key) + " must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DecodeError(std::string(key) + " must be a string");
  return it->get<std::string>();
}

std::optional<Timestamp> optional_timestamp(const Json& doc, const char* key) {
  auto text = optional_string(doc, key);
  if (!text) return std::nullopt;
  auto ts = parse_timestamp(*text);
  if (!ts) throw DecodeError(std::string(key) + ": bad timestamp " + *text);
  return ts;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

Timestamp now_utc() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp ts) {
  std::time_t t = ts.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (text.size() != 20 || text[19] != 'Z') return std::nullopt;
  std::tm tm{};
  std::string copy(text);
  int consumed = 0;
  if (std::sscanf(copy.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ%n", &tm.tm_year, &tm.tm_mon,
                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &consumed) != 6 ||
      consumed != 20) {
    return std::nullopt;
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  std::time_t t = timegm(&tm);
  if (t == static_cast<std::time_t>(-1)) return std::nullopt;
  return Timestamp{std::chrono::seconds{t}};
}

std::optional<double> Stats::average_rating() const {
  if (rating_count == 0) return std::nullopt;
  return static_cast<double>(rating_sum) / static_cast<double>(rating_count);
}

Json encode(const Stats& stats) {
  return Json{{"downloads", stats.downloads},
              {"ratingCount", stats.rating_count},
              {"ratingSum", stats.rating_sum}};
}

Stats decode_stats(const Json& doc) {
  if (!doc.is_object()) throw DecodeError("stats must be an object");
  Stats s;
  try {
    s.downloads = doc.value("downloads", std::uint64_t{0});
    s.rating_count = doc.value("ratingCount", std::uint64_t{0});
    s.rating_sum = doc.value("ratingSum", std::uint64_t{0});
  } catch (const Json::exception& e) {
    throw DecodeError(std::string("stats: ") + e.what());
  }
  return s;
}

Json encode_submission(const ProjectRecord& r) {
  Json doc = Json::object();
  doc["name"] = r.name;
  doc["shortDescription"] = r.short_description;
  doc["longDescription"] = r.long_description;
  if (r.github) doc["github"] = *r.github;
  if (r.readme) doc["readme"] = *r.readme;
  doc["implementationType"] = to_string(r.implementation_type);
  Json topics = Json::array();
  for (auto t : r.topic) topics.push_back(to_string(t));
  doc["topic"] = std::move(topics);
  doc["platform"] = to_string(r.platform);
  doc["tags"] = r.tags;
  doc["complexity"] = to_string(r.complexity);
  Json version = r.version.extra;
  version["instance"] = r.version.instance;
  doc["version"] = std::move(version);
  doc["td"] = r.td;
  return doc;
}

Json encode(const ProjectRecord& r) {
  Json doc = encode_submission(r);
  if (!r.id.empty()) doc["id"] = r.id;
  doc["stats"] = encode(r.stats);
  if (r.created_at) doc["createdAt"] = format_timestamp(*r.created_at);
  if (r.updated_at) doc["updatedAt"] = format_timestamp(*r.updated_at);
  if (!r.owner.empty()) doc["owner"] = r.owner;
  return doc;
}

ProjectRecord decode_project(const Json& doc) {
  if (!doc.is_object()) throw DecodeError("project document must be an object");
  ProjectRecord r;
  r.id = doc.value("id", std::string{});
  r.name = require_string(doc, "name");
  r.short_description = require_string(doc, "shortDescription");
  r.long_description = require_string(doc, "longDescription");
  r.github = optional_string(doc, "github");
  r.readme = optional_string(doc, "readme");
  try {
    r.implementation_type = require_enum<ImplementationType>(doc, "implementationType");
    r.platform = require_enum<Platform>(doc, "platform");
    r.complexity = require_enum<Complexity>(doc, "complexity");
    const auto& topics = doc.at("topic");
    if (!topics.is_array()) throw DecodeError("topic must be an array");
    for (const auto& t : topics) {
      auto topic = t.is_string() ? enum_from_string<Topic>(t.get_ref<const std::string&>())
                                 : std::nullopt;
      if (!topic) throw DecodeError("topic: unknown value " + t.dump());
      r.topic.push_back(*topic);
    }
    const auto& tags = doc.at("tags");
    if (!tags.is_array()) throw DecodeError("tags must be an array");
    for (const auto& t : tags) {
      if (!t.is_string()) throw DecodeError("tags must contain strings");
      r.tags.push_back(t.get<std::string>());
    }
    const auto& version = doc.at("version");
    if (!version.is_object()) throw DecodeError("version must be an object");
    r.version.instance = require_string(version, "instance");
    for (const auto& [key, value] : version.items()) {
      if (key != "instance") r.version.extra.emplace(key, value);
    }
    r.td = doc.at("td");
    if (!r.td.is_object()) throw DecodeError("td must be an object");
  } catch (const Json::out_of_range& e) {
    throw DecodeError(std::string("missing member: ") + e.what());
  }
  if (auto it = doc.find("stats"); it != doc.end()) r.stats = decode_stats(*it);
  r.created_at = optional_timestamp(doc, "createdAt");
  r.updated_at = optional_timestamp(doc, "updatedAt");
  r.owner = doc.value("owner", std::string{});
  return r;
}

Json public_json(const UserAccount& user) {
  return Json{{"id", user.id},
              {"username", user.username},
              {"createdAt", format_timestamp(user.created_at)}};
}

std::string trim(std::string_view text) {
  auto begin = text.begin();
  auto end = text.end();
  while (begin != end && is_space(*begin)) ++begin;
  while (end != begin && is_space(*(end - 1))) --end;
  return std::string(begin, end);
}

ProjectRecord canonicalize(ProjectRecord record) {
  record.name = trim(record.name);
  for (auto& tag : record.tags) tag = trim(tag);
  std::sort(record.tags.begin(), record.tags.end());
  record.tags.erase(std::unique(record.tags.begin(), record.tags.end()), record.tags.end());

  auto by_name = [](Topic a, Topic b) { return to_string(a) < to_string(b); };
  std::sort(record.topic.begin(), record.topic.end(), by_name);
  record.topic.erase(std::unique(record.topic.begin(), record.topic.end()), record.topic.end());
  return record;
}

std::string slugify(std::string_view name) {
  std::string slug;
  bool pending_dash = false;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    bool alnum = (u >= 'a' && u <= 'z') || (u >= '0' && u <= '9') || (u >= 'A' && u <= 'Z');
    if (!alnum) {
      pending_dash = true;
      continue;
    }
    if (pending_dash && !slug.empty()) slug.push_back('-');
    pending_dash = false;
    slug.push_back(static_cast<char>(u >= 'A' && u <= 'Z' ? u - 'A' + 'a' : u));
    if (slug.size() >= 48) break;
  }
  if (slug.empty()) slug = "project";
  return slug;
}

} // namespace wotforge
