#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace poisonguard {

using Hash256 = std::array<uint8_t, 32>;

// Keccak-256 as used by Ethereum (original Keccak padding 0x01, not the
// NIST SHA-3 variant).
Hash256 keccak256(std::span<const uint8_t> data);
Hash256 keccak256(std::string_view text);

// Incremental interface for callers that hash composite encodings.
class Keccak256 {
public:
    Keccak256() { reset(); }

    void reset();
    void update(std::span<const uint8_t> data);
    void update(std::string_view text);
    Hash256 finalize();

private:
    uint64_t state_[25];
    uint8_t buffer_[136];
    size_t buffered_ = 0;
};

}  // namespace poisonguard
