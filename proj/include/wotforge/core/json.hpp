#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

namespace wotforge {

using Json = nlohmann::json;

/// Appends one reference token to a JSON pointer, escaping '~' and '/'.
std::string pointer_append(std::string_view pointer, std::string_view token);
std::string pointer_append(std::string_view pointer, std::size_t index);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

} // namespace wotforge
