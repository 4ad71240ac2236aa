#pragma once

#include "wotforge/core/json.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wotforge {

enum class ImplementationType { Template, Code };
enum class Platform { Raspberry, Arduino, Esp, Other };
enum class Topic { Sensor, Actuator, Robotics, Lighting, Other };
enum class Complexity { Simple, Medium, Expert };

template <class E> struct EnumNames;

template <> struct EnumNames<ImplementationType> {
  static constexpr std::array<std::pair<ImplementationType, std::string_view>, 2> values{{
      {ImplementationType::Template, "template"},
      {ImplementationType::Code, "code"},
  }};
};

template <> struct EnumNames<Platform> {
  static constexpr std::array<std::pair<Platform, std::string_view>, 4> values{{
      {Platform::Raspberry, "raspberry"},
      {Platform::Arduino, "arduino"},
      {Platform::Esp, "ESP"},
      {Platform::Other, "other"},
  }};
};

template <> struct EnumNames<Topic> {
  static constexpr std::array<std::pair<Topic, std::string_view>, 5> values{{
      {Topic::Sensor, "sensor"},
      {Topic::Actuator, "actuator"},
      {Topic::Robotics, "robotics"},
      {Topic::Lighting, "lighting"},
      {Topic::Other, "other"},
  }};
};

template <> struct EnumNames<Complexity> {
  static constexpr std::array<std::pair<Complexity, std::string_view>, 3> values{{
      {Complexity::Simple, "simple"},
      {Complexity::Medium, "medium"},
      {Complexity::Expert, "expert"},
  }};
};

template <class E> std::string_view to_string(E value) {
  for (const auto& [v, name] : EnumNames<E>::values) {
    if (v == value) return name;
  }
  return {};
}

/// Exact, case-sensitive match against the enum's wire names.
template <class E> std::optional<E> enum_from_string(std::string_view text) {
  for (const auto& [v, name] : EnumNames<E>::values) {
    if (name == text) return v;
  }
  return std::nullopt;
}

using Timestamp = std::chrono::sys_seconds;

Timestamp now_utc();
std::string format_timestamp(Timestamp ts);
std::optional<Timestamp> parse_timestamp(std::string_view text);

struct Stats {
  std::uint64_t downloads = 0;
  std::uint64_t rating_count = 0;
  std::uint64_t rating_sum = 0;

  std::optional<double> average_rating() const;
  bool operator==(const Stats&) const = default;
};

struct VersionInfo {
  std::string instance;
  Json::object_t extra; // members other than "instance", kept verbatim

  bool operator==(const VersionInfo&) const = default;
};

struct ProjectRecord {
  std::string id;
  std::string name;
  std::string short_description;
  std::string long_description;
  std::optional<std::string> github;
  std::optional<std::string> readme;
  ImplementationType implementation_type = ImplementationType::Template;
  std::vector<Topic> topic;
  Platform platform = Platform::Other;
  std::vector<std::string> tags;
  Complexity complexity = Complexity::Simple;
  VersionInfo version;
  Json td = Json::object();
  Stats stats;
  std::optional<Timestamp> created_at;
  std::optional<Timestamp> updated_at;
  std::string owner;

  bool operator==(const ProjectRecord&) const = default;
};

struct UserAccount {
  std::string id;
  std::string username;
  std::string password_digest;
  Timestamp created_at{};

  bool operator==(const UserAccount&) const = default;
};

struct ApiToken {
  std::string token;
  std::string user_id;
  Timestamp issued_at{};
};

class DecodeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Member names of the client-facing part of a project document.
inline constexpr std::array<std::string_view, 12> kSubmissionFields{
    "name",     "shortDescription", "longDescription", "github",
    "readme",   "implementationType", "topic",         "platform",
    "tags",     "complexity",       "version",         "td"};

/// Members only the server may set.
inline constexpr std::array<std::string_view, 6> kServerFields{
    "id", "stats", "createdAt", "updatedAt", "owner", "averageRating"};

/// Full interchange document: submission fields plus any server-managed
/// fields that are set.
Json encode(const ProjectRecord& record);

/// Only the client-submittable members.
Json encode_submission(const ProjectRecord& record);

/// Inverse of encode. Server-managed members are optional. Throws DecodeError.
ProjectRecord decode_project(const Json& doc);

Json encode(const Stats& stats);
Stats decode_stats(const Json& doc);

/// Public view of an account; never includes the password digest.
Json public_json(const UserAccount& user);

/// Trims and sorts/deduplicates tags and topics, trims the name.
ProjectRecord canonicalize(ProjectRecord record);

std::string trim(std::string_view text);

/// Lowercase ASCII slug: runs of non-alphanumerics become '-'.
std::string slugify(std::string_view name);

} // namespace wotforge
