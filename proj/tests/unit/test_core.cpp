#include <doctest.h>

#include "fixtures.hpp"
#include "wotforge/core/model.hpp"
#include "wotforge/core/validation_report.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace wotforge;
using wotforge::testing::mearm_submission;

namespace {

// Reference canonicalization written directly against the JSON document.
Json reference_canonical(Json doc) {
  auto strip = [](const std::string& s) {
    const char* ws = " \t\n\r\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  doc["name"] = strip(doc["name"].get<std::string>());
  std::set<std::string> tags;
  for (const auto& t : doc["tags"]) tags.insert(strip(t.get<std::string>()));
  doc["tags"] = std::vector<std::string>(tags.begin(), tags.end());
  std::set<std::string> topics;
  for (const auto& t : doc["topic"]) topics.insert(t.get<std::string>());
  doc["topic"] = std::vector<std::string>(topics.begin(), topics.end());
  return doc;
}

std::vector<Json> valid_fixture_corpus() {
  std::vector<Json> out;
  std::mt19937 rng(7);
  const std::vector<std::string> words{"  padded ", "b", "a", "a", "\tsensor\n", "zeta", "Alpha", "alpha "};
  const std::vector<std::string> topics{"sensor", "actuator", "robotics", "lighting", "other"};
  for (int i = 0; i < 60; ++i) {
    Json doc = i % 2 ? mearm_submission() : wotforge::testing::hue_template_submission();
    doc["name"] = std::string(i % 3, ' ') + "wot-device-" + std::to_string(i) + std::string(i % 4, ' ');
    Json tags = Json::array();
    for (int k = 0; k < 1 + i % 5; ++k) tags.push_back(words[rng() % words.size()]);
    doc["tags"] = tags;
    Json topic = Json::array();
    for (int k = 0; k < 1 + i % 3; ++k) topic.push_back(topics[rng() % topics.size()]);
    doc["topic"] = topic;
    out.push_back(doc);
  }
  return out;
}

} // namespace

TEST_CASE("canonicalize sorts and deduplicates tags") {
  auto record = decode_project(mearm_submission());
  record.tags = {"b", "a", "a"};
  CHECK(canonicalize(record).tags == std::vector<std::string>{"a", "b"});
}

TEST_CASE("canonicalize keeps a single topic unchanged") {
  auto record = decode_project(mearm_submission());
  record.topic = {Topic::Sensor};
  CHECK(canonicalize(record).topic == std::vector<Topic>{Topic::Sensor});
}

TEST_CASE("canonicalize trims the name") {
  auto record = decode_project(mearm_submission());
  record.name = "  wot-mearmpi ";
  CHECK(canonicalize(record).name == "wot-mearmpi");
}

TEST_CASE("canonicalize orders topics by wire name") {
  auto record = decode_project(mearm_submission());
  record.topic = {Topic::Sensor, Topic::Actuator, Topic::Lighting, Topic::Actuator};
  CHECK(canonicalize(record).topic ==
        std::vector<Topic>{Topic::Actuator, Topic::Lighting, Topic::Sensor});
}

TEST_CASE("canonicalize matches the reference implementation over the fixture corpus") {
  for (const auto& doc : valid_fixture_corpus()) {
    auto ours = encode_submission(canonicalize(decode_project(doc)));
    CHECK(ours == reference_canonical(doc));
  }
}

TEST_CASE("canonicalize is idempotent and insensitive to tag order") {
  std::mt19937 rng(11);
  for (const auto& doc : valid_fixture_corpus()) {
    auto once = canonicalize(decode_project(doc));
    CHECK(canonicalize(once) == once);

    Json shuffled = doc;
    auto tags = shuffled["tags"].get<std::vector<std::string>>();
    std::shuffle(tags.begin(), tags.end(), rng);
    shuffled["tags"] = tags;
    CHECK(canonicalize(decode_project(shuffled)) == once);
  }
}

TEST_CASE("project records survive an encode/decode round trip") {
  for (const auto& doc : valid_fixture_corpus()) {
    auto record = canonicalize(decode_project(doc));
    record.id = "wot-device-abc123";
    record.owner = "u-1";
    record.stats = Stats{12, 3, 11};
    record.created_at = Timestamp{std::chrono::seconds{1'700'000'000}};
    record.updated_at = Timestamp{std::chrono::seconds{1'700'000'123}};
    record.version.extra["channel"] = "beta";
    CHECK(decode_project(encode(record)) == record);
    CHECK(decode_project(Json::parse(encode(record).dump())) == record);
  }
}

TEST_CASE("decode_project rejects malformed documents") {
  CHECK_THROWS_AS(decode_project(Json::array()), DecodeError);
  Json doc = mearm_submission();
  doc["platform"] = "toaster";
  CHECK_THROWS_AS(decode_project(doc), DecodeError);
  doc = mearm_submission();
  doc.erase("version");
  CHECK_THROWS_AS(decode_project(doc), DecodeError);
  doc = mearm_submission();
  doc["createdAt"] = "yesterday";
  CHECK_THROWS_AS(decode_project(doc), DecodeError);
}

TEST_CASE("enum wire names") {
  CHECK(to_string(Platform::Esp) == "ESP");
  CHECK(enum_from_string<Platform>("ESP") == Platform::Esp);
  CHECK_FALSE(enum_from_string<Platform>("esp"));
  CHECK(enum_from_string<ImplementationType>("template") == ImplementationType::Template);
}

TEST_CASE("timestamps format as UTC ISO-8601 and parse back") {
  Timestamp ts{std::chrono::seconds{1'560'000'000}};
  CHECK(format_timestamp(ts) == "2019-06-08T13:20:00Z");
  CHECK(parse_timestamp("2019-06-08T13:20:00Z") == ts);
  CHECK_FALSE(parse_timestamp("2019-06-08 13:20:00"));
  CHECK_FALSE(parse_timestamp("2019-06-08T13:20:00Zjunk"));
}

TEST_CASE("stats average") {
  CHECK_FALSE(Stats{}.average_rating());
  CHECK(Stats{0, 2, 9}.average_rating() == doctest::Approx(4.5));
}

TEST_CASE("slugify") {
  CHECK(slugify("Sense HAT server") == "sense-hat-server");
  CHECK(slugify("  wot--mearmpi!! ") == "wot-mearmpi");
  CHECK(slugify("\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9") == "project");
}

TEST_CASE("public user view omits the password digest") {
  UserAccount user{"u-1", "maker", "$argon2id$secret", Timestamp{}};
  auto view = public_json(user);
  CHECK_FALSE(view.contains("passwordDigest"));
  CHECK(view.dump().find("argon2") == std::string::npos);
}

TEST_CASE("utf8 length counts scalar values") {
  CHECK(utf8_length("abc") == 3);
  CHECK(utf8_length("\xC3\xA9\xE2\x82\xAC\xF0\x9F\xA4\x96") == 3);
}

TEST_CASE("json pointer escaping") {
  CHECK(pointer_append("", "a/b~c") == "/a~1b~0c");
  CHECK(pointer_append("/tags", 3) == "/tags/3");
}

TEST_CASE("report validity follows error severity") {
  ValidationReport report;
  CHECK(report.valid());
  report.add("/x", "hint", "just a warning", Severity::Warning);
  CHECK(report.valid());
  report.add("/y", "type", "bad");
  CHECK_FALSE(report.valid());
  CHECK(report.to_json()["issues"].size() == 2);
}
