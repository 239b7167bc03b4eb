#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "poisonguard/keccak.hpp"

namespace poisonguard {

// Deterministic byte stream built on the keccak permutation. Seeded mode
// exists for reproducible tests and fixtures; it is NOT a secure way to
// generate keys you intend to fund. Unseeded mode draws its key from the
// OS entropy source.
class KeccakRng {
public:
    // Fresh key from std::random_device.
    KeccakRng();
    // Deterministic stream for a (seed, stream) pair. Streams with distinct
    // ids are independent, which is how parallel workers stay reproducible.
    explicit KeccakRng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();
    std::array<uint8_t, 32> next_bytes32();

    const Hash256& key() const { return key_; }

private:
    Hash256 key_{};
    uint64_t stream_ = 0;
    uint64_t counter_ = 0;
};

// The block addressed by (key, domain, index): deterministic random access
// into the stream without consuming state.
Hash256 keyed_block(const Hash256& key, std::string_view domain, uint64_t index,
                    uint64_t attempt = 0);

// Expands a 64-bit seed into a stream key.
Hash256 expand_seed(uint64_t seed);

}  // namespace poisonguard
