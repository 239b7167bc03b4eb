#include "poisonguard/bigint.hpp"

#include <algorithm>

#include "poisonguard/errors.hpp"

namespace poisonguard {

BigUint::BigUint(uint64_t value) {
    if (value != 0) {
        limbs_.push_back(static_cast<uint32_t>(value));
        if (value >> 32) limbs_.push_back(static_cast<uint32_t>(value >> 32));
    }
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::from_decimal(std::string_view text) {
    if (text.empty()) throw MalformedNumber("empty numeral");
    BigUint result;
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw MalformedNumber("invalid digit in numeral: " + std::string(text));
        }
        result.mul_small(10);
        result += BigUint(static_cast<uint64_t>(c - '0'));
    }
    return result;
}

BigUint BigUint::from_bytes_be(std::span<const uint8_t> bytes) {
    BigUint result;
    for (uint8_t b : bytes) {
        result.mul_small(256);
        result += BigUint(static_cast<uint64_t>(b));
    }
    return result;
}

BigUint BigUint::pow10(unsigned exponent) {
    BigUint result(1);
    result.mul_pow10(exponent);
    return result;
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    if (rhs.limbs_.size() > limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t sum = carry + limbs_[i];
        if (i < rhs.limbs_.size()) sum += rhs.limbs_[i];
        limbs_[i] = static_cast<uint32_t>(sum);
        carry = sum >> 32;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
}

BigUint& BigUint::mul_small(uint32_t factor) {
    if (factor == 0) {
        limbs_.clear();
        return *this;
    }
    uint64_t carry = 0;
    for (uint32_t& limb : limbs_) {
        const uint64_t product = static_cast<uint64_t>(limb) * factor + carry;
        limb = static_cast<uint32_t>(product);
        carry = product >> 32;
    }
    while (carry) {
        limbs_.push_back(static_cast<uint32_t>(carry));
        carry >>= 32;
    }
    return *this;
}

BigUint& BigUint::mul_pow10(unsigned exponent) {
    // 10^9 is the largest power of ten below 2^32.
    while (exponent >= 9) {
        mul_small(1000000000u);
        exponent -= 9;
    }
    uint32_t rest = 1;
    for (unsigned i = 0; i < exponent; ++i) rest *= 10;
    if (rest != 1) mul_small(rest);
    return *this;
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> work(limbs_.rbegin(), limbs_.rend());  // big-endian
    std::string digits;
    while (!work.empty()) {
        // Divide the big-endian limb vector by 10^9 and emit the remainder.
        uint64_t remainder = 0;
        std::vector<uint32_t> quotient;
        quotient.reserve(work.size());
        for (uint32_t limb : work) {
            const uint64_t acc = (remainder << 32) | limb;
            quotient.push_back(static_cast<uint32_t>(acc / 1000000000u));
            remainder = acc % 1000000000u;
        }
        while (!quotient.empty() && quotient.front() == 0) {
            quotient.erase(quotient.begin());
        }
        work = std::move(quotient);
        std::string chunk = std::to_string(remainder);
        if (!work.empty()) chunk.insert(0, 9 - chunk.size(), '0');
        digits.insert(0, chunk);
    }
    return digits;
}

std::vector<uint8_t> BigUint::to_bytes_be(size_t width) const {
    std::vector<uint8_t> out(width, 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        for (size_t b = 0; b < 4; ++b) {
            const uint8_t byte = static_cast<uint8_t>(limbs_[i] >> (8 * b));
            const size_t pos = 4 * i + b;  // little-endian byte index
            if (pos >= width) {
                if (byte != 0) {
                    throw LengthOverflow("integer does not fit in " +
                                         std::to_string(width) + " bytes");
                }
                continue;
            }
            out[width - 1 - pos] = byte;
        }
    }
    return out;
}

std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) {
        return a.limbs_.size() <=> b.limbs_.size();
    }
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
}

}  // namespace poisonguard
