#include "poisonguard/rng.hpp"

#include <cstring>
#include <random>

namespace poisonguard {

namespace {

void append_u64(Keccak256& hasher, uint64_t value) {
    uint8_t bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<uint8_t>(value >> (8 * i));
    hasher.update(std::span<const uint8_t>(bytes, 8));
}

}  // namespace

Hash256 expand_seed(uint64_t seed) {
    Keccak256 hasher;
    hasher.update(std::string_view("poisonguard.seed"));
    append_u64(hasher, seed);
    return hasher.finalize();
}

Hash256 keyed_block(const Hash256& key, std::string_view domain, uint64_t index,
                    uint64_t attempt) {
    Keccak256 hasher;
    hasher.update(std::span<const uint8_t>(key.data(), key.size()));
    hasher.update(domain);
    append_u64(hasher, index);
    append_u64(hasher, attempt);
    return hasher.finalize();
}

KeccakRng::KeccakRng() {
    std::random_device device;
    for (size_t i = 0; i < key_.size(); i += 4) {
        const uint32_t word = device();
        std::memcpy(key_.data() + i, &word, 4);
    }
}

KeccakRng::KeccakRng(uint64_t seed, uint64_t stream)
    : key_(expand_seed(seed)), stream_(stream) {}

std::array<uint8_t, 32> KeccakRng::next_bytes32() {
    return keyed_block(key_, "stream", stream_, counter_++);
}

uint64_t KeccakRng::next_u64() {
    const Hash256 block = next_bytes32();
    uint64_t value;
    std::memcpy(&value, block.data(), 8);
    return value;
}

}  // namespace poisonguard
