#include "poisonguard/address.hpp"

#include <cctype>

#include "poisonguard/errors.hpp"
#include "poisonguard/keccak.hpp"

namespace poisonguard {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view strip_prefix(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        return text.substr(2);
    }
    return text;
}

}  // namespace

ParsedAddress parse_address(std::string_view text, ParseMode mode) {
    const std::string_view hex = strip_prefix(text);
    if (hex.size() != 40) {
        throw MalformedHex("address must be 40 hex characters, got " +
                           std::to_string(hex.size()));
    }

    ParsedAddress result;
    bool has_lower = false;
    bool has_upper = false;
    for (size_t i = 0; i < 40; ++i) {
        const int value = hex_value(hex[i]);
        if (value < 0) {
            throw MalformedHex("invalid hex character '" + std::string(1, hex[i]) +
                               "' at position " + std::to_string(i));
        }
        has_lower |= (hex[i] >= 'a' && hex[i] <= 'f');
        has_upper |= (hex[i] >= 'A' && hex[i] <= 'F');
        uint8_t& byte = result.address.bytes[i / 2];
        byte = static_cast<uint8_t>((byte << 4) | value);
    }

    // Mixed case asserts a checksum; single-case text makes no claim.
    if (has_lower && has_upper) {
        const std::string expected = checksum_encode(result.address);
        result.checksum_ok = (expected.substr(2) == hex);
        if (!result.checksum_ok && mode == ParseMode::Strict) {
            throw BadChecksum("mixed-case address fails checksum: " + std::string(text));
        }
    }
    return result;
}

Address address_from_hex(std::string_view text) {
    return parse_address(text).address;
}

std::string lower_hex(const Address& addr) {
    std::string out(40, '0');
    for (size_t i = 0; i < 20; ++i) {
        out[2 * i] = kHexDigits[addr.bytes[i] >> 4];
        out[2 * i + 1] = kHexDigits[addr.bytes[i] & 0x0f];
    }
    return out;
}

std::string checksum_encode(const Address& addr) {
    const std::string hex = lower_hex(addr);
    const Hash256 digest = keccak256(hex);
    std::string out = "0x";
    out.reserve(42);
    for (size_t i = 0; i < 40; ++i) {
        const uint8_t nibble =
            (i % 2 == 0) ? (digest[i / 2] >> 4) : (digest[i / 2] & 0x0f);
        char c = hex[i];
        if (c >= 'a' && c <= 'f' && nibble >= 8) c = static_cast<char>(c - 'a' + 'A');
        out.push_back(c);
    }
    return out;
}

ShortForm shorten(const Address& addr, unsigned prefix_len, unsigned suffix_len) {
    if (prefix_len + suffix_len > 40) {
        throw LengthOverflow("prefix " + std::to_string(prefix_len) + " + suffix " +
                             std::to_string(suffix_len) + " exceeds 40 hex chars");
    }
    const std::string full = checksum_encode(addr);
    ShortForm form{prefix_len, suffix_len, {}};
    if (prefix_len + suffix_len == 40) {
        form.text = full;
        return form;
    }
    const std::string_view hex = std::string_view(full).substr(2);
    form.text = "0x";
    form.text += hex.substr(0, prefix_len);
    form.text += "...";
    form.text += hex.substr(40 - suffix_len);
    return form;
}

SimilarityScore similarity(const Address& a, const Address& b) {
    const std::string ha = lower_hex(a);
    const std::string hb = lower_hex(b);
    SimilarityScore score;
    while (score.prefix_match < 40 && ha[score.prefix_match] == hb[score.prefix_match]) {
        ++score.prefix_match;
    }
    while (score.suffix_match < 40 &&
           ha[39 - score.suffix_match] == hb[39 - score.suffix_match]) {
        ++score.suffix_match;
    }
    return score;
}

bool is_lookalike(const SimilarityScore& score, const LookalikeThresholds& policy) {
    // (40, 40) only occurs for byte-equal addresses.
    if (score.prefix_match == 40 && score.suffix_match == 40) return false;
    return score.prefix_match >= policy.min_prefix &&
           score.suffix_match >= policy.min_suffix;
}

bool is_lookalike(const Address& a, const Address& b, const LookalikeThresholds& policy) {
    if (a == b) return false;
    return is_lookalike(similarity(a, b), policy);
}

}  // namespace poisonguard
