#include "poisonguard/hex.hpp"

#include <vector>

#include "poisonguard/errors.hpp"

namespace poisonguard {

namespace {

constexpr char kDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view strip_0x(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        return text.substr(2);
    }
    return text;
}

}  // namespace

std::string to_hex(std::span<const uint8_t> bytes) {
    std::string out = "0x";
    out.reserve(2 + 2 * bytes.size());
    for (uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

std::string to_hex(const Hash256& hash) {
    return to_hex(std::span<const uint8_t>(hash.data(), hash.size()));
}

std::vector<uint8_t> parse_hex_bytes(std::string_view text) {
    const std::string_view hex = strip_0x(text);
    if (hex.size() % 2 != 0) throw MalformedHex("odd-length hex string");
    std::vector<uint8_t> out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw MalformedHex("invalid hex character");
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

Hash256 parse_hash256(std::string_view text) {
    const std::vector<uint8_t> bytes = parse_hex_bytes(text);
    if (bytes.size() != 32) {
        throw MalformedHex("hash must be 32 bytes, got " + std::to_string(bytes.size()));
    }
    Hash256 out;
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

}  // namespace poisonguard
