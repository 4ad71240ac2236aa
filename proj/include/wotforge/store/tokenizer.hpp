#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wotforge::store {

/// Lowercases ASCII and splits on every non-alphanumeric ASCII byte.
/// Bytes >= 0x80 (UTF-8 sequences) stay inside tokens. Empty tokens are
/// dropped; order and duplicates are preserved.
std::vector<std::string> tokenize(std::string_view text);

} // namespace wotforge::store
