#include "wotforge/td/validation.hpp"

#include "wotforge/core/model.hpp"
#include "wotforge/td/template.hpp"

#include <array>
#include <optional>

namespace wotforge::td {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) { return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }

bool is_uri_char(char c) {
  if (is_alpha(c) || is_digit(c)) return true;
  constexpr std::string_view allowed = "-._~:/?#[]@!$&'()*+,;=";
  return allowed.find(c) != std::string_view::npos;
}

void check_string(ValidationReport& report, const Json& value, const std::string& path,
                  std::size_t min_length, std::optional<std::size_t> max_length) {
  if (!value.is_string()) {
    report.add(path, "type", "expected a string");
    return;
  }
  auto length = utf8_length(value.get_ref<const std::string&>());
  if (length < min_length) {
    report.add(path, "minLength",
               "must be at least " + std::to_string(min_length) + " characters, got " +
                   std::to_string(length));
  }
  if (max_length && length > *max_length) {
    report.add(path, "maxLength",
               "must be at most " + std::to_string(*max_length) + " characters, got " +
                   std::to_string(length));
  }
}

void check_uri(ValidationReport& report, const Json& value, const std::string& path) {
  if (!value.is_string()) {
    report.add(path, "type", "expected a string");
    return;
  }
  if (!is_absolute_uri(value.get_ref<const std::string&>())) {
    report.add(path, "format", "must be an absolute URI");
  }
}

template <class E> bool in_enum(const Json& value) {
  return value.is_string() && enum_from_string<E>(value.get_ref<const std::string&>());
}

template <class E> std::string enum_list() {
  std::string out;
  for (const auto& [v, name] : EnumNames<E>::values) {
    if (!out.empty()) out += ", ";
    out += '"';
    out += name;
    out += '"';
  }
  return out;
}

template <class E> void check_enum(ValidationReport& report, const Json& value,
                                   const std::string& path) {
  if (!in_enum<E>(value)) report.add(path, "enum", "must be one of " + enum_list<E>());
}

bool has_duplicates(const Json& array) {
  for (std::size_t i = 0; i < array.size(); ++i) {
    for (std::size_t j = i + 1; j < array.size(); ++j) {
      if (array[i] == array[j]) return true;
    }
  }
  return false;
}

/// Shared array shape for topic and tags: an array, non-empty, unique.
bool check_set_shape(ValidationReport& report, const Json& value, const std::string& path) {
  if (!value.is_array()) {
    report.add(path, "type", "expected an array");
    return false;
  }
  if (value.empty()) report.add(path, "minItems", "must contain at least 1 item");
  if (has_duplicates(value)) report.add(path, "uniqueItems", "items must be unique");
  return true;
}

void check_version(ValidationReport& report, const Json& value, const std::string& path) {
  if (!value.is_object()) {
    report.add(path, "type", "expected an object");
    return;
  }
  auto instance_path = pointer_append(path, "instance");
  auto it = value.find("instance");
  if (it == value.end()) {
    report.add(instance_path, "required", "instance is required");
  } else if (!it->is_string()) {
    report.add(instance_path, "type", "expected a string");
  }
}

constexpr std::array<std::string_view, 10> kRequired{
    "name",     "shortDescription", "longDescription", "implementationType", "topic",
    "platform", "tags",             "complexity",      "version",            "td"};

void check_forms(ValidationReport& report, const Json& forms, const std::string& path) {
  if (!forms.is_array()) {
    report.add(path, "type", "forms must be an array");
    return;
  }
  for (std::size_t i = 0; i < forms.size(); ++i) {
    auto item_path = pointer_append(path, i);
    const auto& form = forms[i];
    if (!form.is_object()) {
      report.add(item_path, "type", "form must be an object");
      continue;
    }
    auto href = form.find("href");
    if (href == form.end()) {
      report.add(pointer_append(item_path, "href"), "required", "form requires an href");
    } else if (!href->is_string()) {
      report.add(pointer_append(item_path, "href"), "type", "href must be a string");
    }
  }
}

void walk_for_forms(ValidationReport& report, const Json& node, const std::string& path) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      auto child = pointer_append(path, key);
      if (key == "forms") {
        check_forms(report, value, child);
      } else {
        walk_for_forms(report, value, child);
      }
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      walk_for_forms(report, node[i], pointer_append(path, i));
    }
  }
}

} // namespace

bool is_absolute_uri(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || !is_alpha(text[0])) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = text[i];
    if (!is_alpha(c) && !is_digit(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (std::size_t i = colon + 1; i < text.size(); ++i) {
    char c = text[i];
    if (c == '%') {
      if (i + 2 >= text.size()) return false;
      if (!is_hex(text[i + 1]) || !is_hex(text[i + 2])) return false;
      i += 2;
      continue;
    }
    if (!is_uri_char(c)) return false;
  }
  return true;
}

ValidationReport validate_project_submission(const Json& doc) {
  ValidationReport report;
  if (!doc.is_object()) {
    report.add("", "type", "submission must be a JSON object");
    return report;
  }

  for (auto field : kRequired) {
    if (!doc.contains(field)) {
      report.add(pointer_append("", field), "required", std::string(field) + " is required");
    }
  }
  auto type = doc.find("implementationType");
  if (type != doc.end() && *type == "code" && !doc.contains("github")) {
    report.add("/github", "required", "github is required when implementationType is \"code\"");
  }

  for (const auto& [key, value] : doc.items()) {
    auto path = pointer_append("", key);
    if (key == "name") {
      check_string(report, value, path, 5, std::nullopt);
    } else if (key == "shortDescription") {
      check_string(report, value, path, 5, 180);
    } else if (key == "longDescription") {
      check_string(report, value, path, 5, 500);
    } else if (key == "github" || key == "readme") {
      check_uri(report, value, path);
    } else if (key == "implementationType") {
      check_enum<ImplementationType>(report, value, path);
    } else if (key == "platform") {
      check_enum<Platform>(report, value, path);
    } else if (key == "complexity") {
      check_enum<Complexity>(report, value, path);
    } else if (key == "topic") {
      if (check_set_shape(report, value, path)) {
        for (std::size_t i = 0; i < value.size(); ++i) {
          check_enum<Topic>(report, value[i], pointer_append(path, i));
        }
      }
    } else if (key == "tags") {
      if (check_set_shape(report, value, path)) {
        for (std::size_t i = 0; i < value.size(); ++i) {
          check_string(report, value[i], pointer_append(path, i), 1, std::nullopt);
        }
      }
    } else if (key == "version") {
      check_version(report, value, path);
    } else if (key == "td") {
      if (!value.is_object()) report.add(path, "type", "expected an object");
    } else {
      report.add(path, "unexpectedField", "unknown member \"" + key + "\"");
    }
  }
  return report;
}

ValidationReport validate_td_structure(const Json& doc, TdValidationOptions options) {
  ValidationReport report;
  if (!doc.is_object()) {
    report.add("", "type", "Thing Description must be a JSON object");
    return report;
  }

  auto title = doc.find("title");
  if (title == doc.end()) {
    report.add("/title", "required", "title is required");
  } else if (!title->is_string()) {
    report.add("/title", "type", "title must be a string");
  } else if (title->get_ref<const std::string&>().empty()) {
    report.add("/title", "minLength", "title must not be empty");
  }

  for (const char* map_name : {"properties", "actions", "events"}) {
    auto it = doc.find(map_name);
    if (it == doc.end()) continue;
    auto path = pointer_append("", map_name);
    if (!it->is_object()) {
      report.add(path, "type", std::string(map_name) + " must be an object");
      continue;
    }
    for (const auto& [name, interaction] : it->items()) {
      auto member_path = pointer_append(path, name);
      if (!interaction.is_object()) {
        report.add(member_path, "type", "interaction must be an object");
        continue;
      }
      walk_for_forms(report, interaction, member_path);
    }
  }

  auto scan = scan_placeholders(doc);
  if (!options.allow_placeholders) {
    report.issues().insert(report.issues().end(), scan.occurrences.begin(),
                           scan.occurrences.end());
  }
  report.issues().insert(report.issues().end(), scan.malformed.begin(), scan.malformed.end());
  return report;
}

} // namespace wotforge::td
