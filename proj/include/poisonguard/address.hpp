#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace poisonguard {

// 20-byte account identifier. Equality is byte equality; display casing is a
// rendering concern, never part of the value.
struct Address {
    std::array<uint8_t, 20> bytes{};

    friend auto operator<=>(const Address&, const Address&) = default;
};

enum class ParseMode {
    // Accept mixed-case text that fails checksum validation, but report it.
    // Providers habitually return all-lowercase, so this is the default.
    Lenient,
    Strict,
};

struct ParsedAddress {
    Address address;
    // False when the input was mixed-case and its casing disagrees with the
    // checksum rendering; all-lowercase and all-uppercase inputs carry no
    // checksum claim and are always ok.
    bool checksum_ok = true;
};

// Parses "0x"-prefixed (or bare) 40-hex-char text. Throws MalformedHex on
// anything else, BadChecksum in strict mode for checksum-violating casing.
ParsedAddress parse_address(std::string_view text, ParseMode mode = ParseMode::Lenient);

// Convenience for trusted inputs (fixtures we wrote, compiled-in constants).
Address address_from_hex(std::string_view text);

// Lowercase 40-char hex, no "0x" prefix.
std::string lower_hex(const Address& addr);

// Mixed-case rendering: each hex digit is uppercased iff the corresponding
// nibble of keccak-256 of the lowercase hex string is >= 8. "0x"-prefixed.
std::string checksum_encode(const Address& addr);

struct ShortForm {
    unsigned prefix_len = 0;
    unsigned suffix_len = 0;
    std::string text;
};

// UI shortening: "0x" + first prefix_len chars of the checksummed rendering +
// "..." + last suffix_len chars. A 40-char total renders the full address
// with no ellipsis. Throws LengthOverflow when prefix + suffix > 40.
ShortForm shorten(const Address& addr, unsigned prefix_len, unsigned suffix_len);

struct SimilarityScore {
    unsigned prefix_match = 0;  // hex chars, 0..40
    unsigned suffix_match = 0;  // hex chars, 0..40

    friend bool operator==(const SimilarityScore&, const SimilarityScore&) = default;
};

// Longest common prefix/suffix of the two lowercase hex renderings. Users
// compare rendered glyphs, and wallets render casing inconsistently, so the
// comparison is case-insensitive by construction.
SimilarityScore similarity(const Address& a, const Address& b);

struct LookalikeThresholds {
    unsigned min_prefix = 4;
    unsigned min_suffix = 4;
};

// True iff both ends meet the thresholds and the addresses are distinct.
// (40, 40) is exactly byte equality, and an address is not its own
// look-alike.
bool is_lookalike(const SimilarityScore& score, const LookalikeThresholds& policy);
bool is_lookalike(const Address& a, const Address& b, const LookalikeThresholds& policy);

}  // namespace poisonguard
