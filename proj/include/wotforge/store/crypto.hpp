#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace wotforge::store {

/// n characters drawn uniformly from [a-z0-9] using the system CSPRNG.
std::string random_lowercase_id(std::size_t n);

/// 32 random bytes, base64url without padding (43 characters).
std::string random_token();

/// Hex SHA-256; tokens are only ever persisted in this form.
std::string sha256_hex(std::string_view data);

/// Salted, memory-hard password digest and its verification.
std::string hash_password(std::string_view password);
bool verify_password(std::string_view digest, std::string_view password);

} // namespace wotforge::store
