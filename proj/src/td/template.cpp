#include "wotforge/td/template.hpp"

#include "wotforge/td/validation.hpp"

namespace wotforge::td {

namespace {

bool is_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

struct Token {
  std::size_t begin; // offset of "{{"
  std::size_t end;   // one past "}}"
  std::string name;
};

struct StringScan {
  std::vector<Token> tokens;
  std::optional<std::size_t> malformed_at;
};

StringScan scan_string(std::string_view text) {
  StringScan out;
  std::size_t i = 0;
  while (i + 1 < text.size()) {
    if (text[i] == '{' && text[i + 1] == '{') {
      std::size_t j = i + 2;
      while (j < text.size() && is_name_char(text[j])) ++j;
      if (j == i + 2 || j + 1 >= text.size() || text[j] != '}' || text[j + 1] != '}') {
        out.malformed_at = i;
        return out;
      }
      out.tokens.push_back(Token{i, j + 2, std::string(text.substr(i + 2, j - i - 2))});
      i = j + 2;
    } else if (text[i] == '}' && text[i + 1] == '}') {
      out.malformed_at = i;
      return out;
    } else {
      ++i;
    }
  }
  return out;
}

void scan_node(const Json& node, const std::string& path, PlaceholderScan& out) {
  if (node.is_string()) {
    const auto& text = node.get_ref<const std::string&>();
    auto scan = scan_string(text);
    if (scan.malformed_at) {
      out.malformed.push_back(Issue{path, "malformedPlaceholder",
                                    "malformed placeholder at offset " +
                                        std::to_string(*scan.malformed_at) + " in " + path});
      return;
    }
    if (scan.tokens.empty()) return;
    std::string names;
    for (const auto& token : scan.tokens) {
      out.names.insert(token.name);
      if (!names.empty()) names += ", ";
      names += "{{" + token.name + "}}";
    }
    out.occurrences.push_back(Issue{path, "placeholder", "unresolved placeholder " + names});
  } else if (node.is_object()) {
    for (const auto& [key, value] : node.items()) scan_node(value, pointer_append(path, key), out);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) scan_node(node[i], pointer_append(path, i), out);
  }
}

Json substitute(const Json& node, const Bindings& bindings) {
  if (node.is_string()) {
    const auto& text = node.get_ref<const std::string&>();
    auto scan = scan_string(text);
    if (scan.tokens.empty()) return node;
    std::string out;
    std::size_t cursor = 0;
    for (const auto& token : scan.tokens) {
      out.append(text, cursor, token.begin - cursor);
      out += bindings.find(token.name)->second;
      cursor = token.end;
    }
    out.append(text, cursor, std::string::npos);
    return out;
  }
  if (node.is_object()) {
    Json copy = Json::object();
    for (const auto& [key, value] : node.items()) copy[key] = substitute(value, bindings);
    return copy;
  }
  if (node.is_array()) {
    Json copy = Json::array();
    for (const auto& item : node) copy.push_back(substitute(item, bindings));
    return copy;
  }
  return node;
}

} // namespace

PlaceholderScan scan_placeholders(const Json& document) {
  PlaceholderScan out;
  scan_node(document, "", out);
  return out;
}

std::set<std::string> extract_placeholders(const Json& document) {
  auto scan = scan_placeholders(document);
  if (!scan.malformed.empty()) {
    ValidationReport report;
    report.issues() = scan.malformed;
    throw TemplateError("malformed placeholder at " +
                            (scan.malformed.front().path.empty() ? std::string("/")
                                                                 : scan.malformed.front().path),
                        std::move(report));
  }
  return std::move(scan.names);
}

TdTemplate::TdTemplate(Json document) : document_(std::move(document)) {
  if (!document_.is_object()) throw TemplateError("TD template must be a JSON object");
  placeholders_ = extract_placeholders(document_);
}

Json instantiate_template(const TdTemplate& tmpl, const Bindings& bindings) {
  std::vector<std::string> missing;
  for (const auto& name : tmpl.placeholders()) {
    if (bindings.find(name) == bindings.end()) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string message = "missing binding: ";
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) message += ", ";
      message += missing[i];
    }
    throw TemplateError(message, {}, std::move(missing));
  }

  Json result = tmpl.placeholders().empty() ? tmpl.document() : substitute(tmpl.document(), bindings);
  auto report = validate_td_structure(result);
  if (!report.valid()) throw TemplateError("instantiated TD fails structural validation", report);
  return result;
}

} // namespace wotforge::td
