#include "fixtures.hpp"

#include <functional>
#include <random>

namespace wotforge::testing {

using nlohmann::json;

json base_url_td() {
  return json::parse(R"({
    "@context": "https://www.w3.org/2019/wot/td/v1",
    "title": "Hue Bridge Light",
    "securityDefinitions": {"nosec_sc": {"scheme": "nosec"}},
    "security": ["nosec_sc"],
    "properties": {
      "on": {"type": "boolean", "forms": [{"href": "{{BASE_URL}}/lights/1/state"}]},
      "brightness": {"type": "integer", "forms": [{"href": "{{BASE_URL}}/lights/1/bri"}]}
    },
    "actions": {
      "toggle": {"forms": [{"href": "{{BASE_URL}}/lights/1/toggle", "op": "invokeaction"}]}
    }
  })");
}

json mearm_submission() {
  return json::parse(R"({
    "name": "wot-mearmpi",
    "shortDescription": "W3C WoT interface for the MeArm Pi Robotic Arm",
    "longDescription": "A Python Flask server exposing the MeArm Pi servos as WoT actions and properties.",
    "github": "https://github.com/example/wot-mearmpi",
    "implementationType": "code",
    "topic": ["robotics", "actuator"],
    "platform": "raspberry",
    "tags": ["mearm", "robot arm", "flask"],
    "complexity": "simple",
    "version": {"instance": "1.0.0"},
    "td": {
      "title": "MeArm Pi",
      "properties": {"base": {"type": "integer", "forms": [{"href": "http://mearm.local:5000/base"}]}},
      "actions": {"grab": {"forms": [{"href": "http://mearm.local:5000/grab"}]}}
    }
  })");
}

json hue_template_submission() {
  json doc = json::parse(R"({
    "name": "Philips Hue TD",
    "shortDescription": "Thing Description template for a Philips Hue bridge",
    "longDescription": "Describes the Hue REST API as a W3C Thing Description; bind BASE_URL to your bridge.",
    "implementationType": "template",
    "topic": ["lighting"],
    "platform": "other",
    "tags": ["hue", "lighting"],
    "complexity": "medium",
    "version": {"instance": "0.2"}
  })");
  doc["td"] = base_url_td();
  return doc;
}

std::string repeat(const std::string& unit, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += unit;
  return out;
}

namespace {

using Mutation = std::function<void(json&)>;

std::vector<std::pair<std::string, Mutation>> mutation_pool() {
  std::vector<std::pair<std::string, Mutation>> pool;
  auto set = [&](const std::string& label, const std::string& key, json value) {
    pool.emplace_back(label, [key, value](json& d) { d[key] = value; });
  };
  auto erase = [&](const std::string& key) {
    pool.emplace_back("missing " + key, [key](json& d) { d.erase(key); });
  };

  for (std::size_t n : {0, 1, 4, 5, 6, 40}) {
    set("name len " + std::to_string(n), "name", repeat("n", n));
    set("name multibyte len " + std::to_string(n), "name", repeat("\xC3\xA9", n));
  }
  for (std::size_t n : {4, 5, 179, 180, 181}) {
    set("short len " + std::to_string(n), "shortDescription", repeat("s", n));
    set("short multibyte len " + std::to_string(n), "shortDescription", repeat("\xE2\x82\xAC", n));
  }
  for (std::size_t n : {4, 5, 499, 500, 501}) {
    set("long len " + std::to_string(n), "longDescription", repeat("l", n));
    set("long 4-byte len " + std::to_string(n), "longDescription", repeat("\xF0\x9F\xA4\x96", n));
  }
  for (const char* bad : {"Template", "codes", "", "CODE"}) set(std::string("type ") + bad, "implementationType", bad);
  for (const char* bad : {"Raspberry", "esp", "ESP32", "pi"}) set(std::string("platform ") + bad, "platform", bad);
  for (const char* bad : {"Simple", "hard", "EXPERT"}) set(std::string("complexity ") + bad, "complexity", bad);
  set("type number", "implementationType", 1);
  set("platform null", "platform", nullptr);
  set("complexity array", "complexity", json::array({"simple"}));
  set("implementationType template", "implementationType", "template");
  set("implementationType code", "implementationType", "code");
  set("platform ESP", "platform", "ESP");
  set("platform arduino", "platform", "arduino");
  set("complexity expert", "complexity", "expert");

  set("topic empty", "topic", json::array());
  set("topic duplicate", "topic", json::array({"sensor", "sensor"}));
  set("topic misspelled", "topic", json::array({"sensors"}));
  set("topic capitalised", "topic", json::array({"Sensor", "lighting"}));
  set("topic scalar", "topic", "sensor");
  set("topic all", "topic", json::array({"sensor", "actuator", "robotics", "lighting", "other"}));
  set("topic number item", "topic", json::array({1}));

  set("tags empty", "tags", json::array());
  set("tags duplicate", "tags", json::array({"a", "a"}));
  set("tags empty string", "tags", json::array({""}));
  set("tags number", "tags", json::array({"ok", 7}));
  set("tags scalar", "tags", "tag");
  set("tags whitespace", "tags", json::array({" spaced ", "x"}));
  set("tags many", "tags", json::array({"a", "b", "c", "d", "e", "f"}));

  set("github plain", "github", "https://github.com/acme/thing");
  set("github gitlab", "github", "https://gitlab.com/acme/thing");
  set("github no scheme", "github", "github.com/acme/thing");
  set("github space", "github", "https://exa mple.com/x");
  set("github bad escape", "github", "https://example.com/%zz");
  set("github digit scheme", "github", "1http://example.com");
  set("github ftp", "github", "ftp://example.com/repo");
  set("github number", "github", 42);
  set("readme mailto", "readme", "mailto:maker@example.com");
  set("readme raw", "readme", "https://raw.githubusercontent.com/acme/thing/main/README.md");
  set("readme relative", "readme", "/README.md");
  set("readme escape ok", "readme", "https://example.com/a%20b");
  set("readme unicode", "readme", "https://example.com/\xC3\xA9");
  erase("github");
  erase("readme");

  set("version no instance", "version", json::object());
  set("version instance number", "version", json{{"instance", 3}});
  set("version extra", "version", json{{"instance", "2.0"}, {"channel", "beta"}});
  set("version string", "version", "1.0");

  set("td array", "td", json::array());
  set("td string", "td", "{}");
  set("td empty object", "td", json::object());

  for (const char* key : {"id", "stats", "owner", "createdAt", "updatedAt", "foo"}) {
    set(std::string("unexpected ") + key, key, "x");
  }
  for (const char* key : {"name", "shortDescription", "longDescription", "implementationType", "topic",
                          "platform", "tags", "complexity", "version", "td"}) {
    erase(key);
  }
  return pool;
}

} // namespace

std::vector<LabeledDoc> submission_corpus(std::uint32_t seed, std::size_t random_cases) {
  std::vector<LabeledDoc> out;
  const json bases[] = {mearm_submission(), hue_template_submission()};
  const char* base_names[] = {"code", "template"};

  out.push_back({"code base", bases[0]});
  out.push_back({"template base", bases[1]});
  out.push_back({"empty object", json::object()});
  out.push_back({"root array", json::array()});
  out.push_back({"root string", "project"});

  auto pool = mutation_pool();
  for (int b = 0; b < 2; ++b) {
    for (const auto& [label, mutate] : pool) {
      json doc = bases[b];
      mutate(doc);
      out.push_back({std::string(base_names[b]) + ": " + label, std::move(doc)});
    }
  }

  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> count(1, 3);
  for (std::size_t i = 0; i < random_cases; ++i) {
    int b = static_cast<int>(rng() % 2);
    json doc = bases[b];
    std::string label = std::string("random ") + base_names[b];
    int n = count(rng);
    for (int k = 0; k < n; ++k) {
      const auto& [name, mutate] = pool[pick(rng)];
      mutate(doc);
      label += " + " + name;
    }
    out.push_back({std::move(label), std::move(doc)});
  }
  return out;
}

} // namespace wotforge::testing
