#pragma once

#include "wotforge/core/json.hpp"
#include "wotforge/core/validation_report.hpp"

#include <string_view>

namespace wotforge::td {

/// RFC 3986 absolute-URI syntax check (scheme ":" hier-part, any scheme).
bool is_absolute_uri(std::string_view text);

/// Checks a client project submission against the project schema
/// (schema/wotify-project.schema.json). Every violation is reported with
/// its JSON pointer; unknown top-level members are "unexpectedField".
ValidationReport validate_project_submission(const Json& doc);

struct TdValidationOptions {
  /// Drop "placeholder" issues (unbound {{NAME}} tokens are legal in a
  /// stored template). Malformed placeholders are still reported.
  bool allow_placeholders = false;
};

/// Structural subset of a Thing Description: non-empty string title,
/// properties/actions/events maps of objects, forms entries with a string
/// href, and no leftover placeholders. Never modifies its input.
ValidationReport validate_td_structure(const Json& doc, TdValidationOptions options = {});

} // namespace wotforge::td
