#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poisonguard {

// Arbitrary-precision unsigned integer. Token amounts are 256-bit on chain
// and must compare exactly, so no floating point appears anywhere near them.
class BigUint {
public:
    BigUint() = default;
    BigUint(uint64_t value);

    // Parses a plain decimal numeral. Throws MalformedNumber.
    static BigUint from_decimal(std::string_view text);
    // Big-endian byte string, e.g. a 32-byte ABI word.
    static BigUint from_bytes_be(std::span<const uint8_t> bytes);
    static BigUint pow10(unsigned exponent);

    std::string to_decimal() const;
    // Fixed-width big-endian encoding; throws LengthOverflow if the value
    // does not fit.
    std::vector<uint8_t> to_bytes_be(size_t width) const;

    bool is_zero() const { return limbs_.empty(); }

    BigUint& operator+=(const BigUint& rhs);
    BigUint& mul_small(uint32_t factor);
    BigUint& mul_pow10(unsigned exponent);

    friend BigUint operator+(BigUint lhs, const BigUint& rhs) {
        lhs += rhs;
        return lhs;
    }

    friend bool operator==(const BigUint& a, const BigUint& b) = default;
    friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b);

private:
    void trim();

    // Base 2^32 little-endian limbs; empty means zero.
    std::vector<uint32_t> limbs_;
};

}  // namespace poisonguard
