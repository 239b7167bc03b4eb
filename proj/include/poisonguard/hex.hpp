#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poisonguard/keccak.hpp"

namespace poisonguard {

// Lowercase hex with "0x" prefix.
std::string to_hex(std::span<const uint8_t> bytes);
std::string to_hex(const Hash256& hash);

// Parses "0x"-prefixed or bare hex of exactly 64 chars. Throws MalformedHex.
Hash256 parse_hash256(std::string_view text);

// Parses hex of any even length. Throws MalformedHex.
std::vector<uint8_t> parse_hex_bytes(std::string_view text);

}  // namespace poisonguard
