#include "poisonguard/keccak.hpp"

#include <cstring>

namespace poisonguard {

namespace {

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotation[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                               27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr int kPermutation[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                  15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

inline uint64_t rotl64(uint64_t value, int shift) {
    return (value << shift) | (value >> (64 - shift));
}

void keccak_f1600(uint64_t st[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        uint64_t bc[5];
        for (int i = 0; i < 5; ++i) {
            bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        }
        for (int i = 0; i < 5; ++i) {
            const uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
        }
        // rho + pi
        uint64_t t = st[1];
        for (int i = 0; i < 24; ++i) {
            const int j = kPermutation[i];
            const uint64_t tmp = st[j];
            st[j] = rotl64(t, kRotation[i]);
            t = tmp;
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            uint64_t row[5];
            for (int i = 0; i < 5; ++i) row[i] = st[j + i];
            for (int i = 0; i < 5; ++i) {
                st[j + i] = row[i] ^ (~row[(i + 1) % 5] & row[(i + 2) % 5]);
            }
        }
        // iota
        st[0] ^= kRoundConstants[round];
    }
}

constexpr size_t kRate = 136;  // 1088-bit rate for 256-bit output

}  // namespace

void Keccak256::reset() {
    std::memset(state_, 0, sizeof(state_));
    std::memset(buffer_, 0, sizeof(buffer_));
    buffered_ = 0;
}

void Keccak256::update(std::span<const uint8_t> data) {
    size_t offset = 0;
    while (offset < data.size()) {
        const size_t take = std::min(kRate - buffered_, data.size() - offset);
        std::memcpy(buffer_ + buffered_, data.data() + offset, take);
        buffered_ += take;
        offset += take;
        if (buffered_ == kRate) {
            for (size_t i = 0; i < kRate / 8; ++i) {
                uint64_t lane;
                std::memcpy(&lane, buffer_ + 8 * i, 8);
                state_[i] ^= lane;  // little-endian host assumed
            }
            keccak_f1600(state_);
            buffered_ = 0;
        }
    }
}

void Keccak256::update(std::string_view text) {
    update(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()),
                                    text.size()));
}

Hash256 Keccak256::finalize() {
    uint8_t block[kRate];
    std::memset(block, 0, sizeof(block));
    std::memcpy(block, buffer_, buffered_);
    block[buffered_] ^= 0x01;
    block[kRate - 1] ^= 0x80;
    for (size_t i = 0; i < kRate / 8; ++i) {
        uint64_t lane;
        std::memcpy(&lane, block + 8 * i, 8);
        state_[i] ^= lane;
    }
    keccak_f1600(state_);

    Hash256 out;
    std::memcpy(out.data(), state_, out.size());
    return out;
}

Hash256 keccak256(std::span<const uint8_t> data) {
    Keccak256 h;
    h.update(data);
    return h.finalize();
}

Hash256 keccak256(std::string_view text) {
    Keccak256 h;
    h.update(text);
    return h.finalize();
}

}  // namespace poisonguard
