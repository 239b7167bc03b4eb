#include "oracles.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "poisonguard/keccak.hpp"

namespace oracles {

using poisonguard::AccountHistory;
using poisonguard::Address;
using poisonguard::DetectorConfig;
using poisonguard::LegitTokenRegistry;
using poisonguard::SimilarityScore;

// --- EIP-55 ----------------------------------------------------------------

std::string checksum_casing(const std::string& lower_hex_40) {
    const poisonguard::Hash256 digest = poisonguard::keccak256(lower_hex_40);
    std::string out = lower_hex_40;
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 'a' || out[i] > 'f') continue;
        const uint8_t byte = digest[i / 2];
        const uint8_t nibble = (i % 2 == 0) ? (byte >> 4) : (byte & 0x0f);
        if (nibble >= 8) out[i] = static_cast<char>(out[i] - ('a' - 'A'));
    }
    return out;
}

// --- ERC-20 Transfer decoding ----------------------------------------------

namespace {

std::string hex_of(const uint8_t* data, size_t size) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * size);
    for (size_t i = 0; i < size; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

// Decimal-string accumulator: out = out * 256 + value.
void shift_in_byte(std::string& decimal, uint8_t value) {
    std::string result;
    int carry = value;
    for (auto it = decimal.rbegin(); it != decimal.rend(); ++it) {
        const int product = (*it - '0') * 256 + carry;
        result.push_back(static_cast<char>('0' + product % 10));
        carry = product / 10;
    }
    while (carry) {
        result.push_back(static_cast<char>('0' + carry % 10));
        carry /= 10;
    }
    std::reverse(result.begin(), result.end());
    while (result.size() > 1 && result.front() == '0') result.erase(result.begin());
    decimal = result.empty() ? "0" : result;
}

}  // namespace

DecodedTransfer decode_transfer(const poisonguard::RawLog& log) {
    assert(log.topics.size() == 3);
    DecodedTransfer out;
    out.from_hex = hex_of(log.topics[1].data() + 12, 20);
    out.to_hex = hex_of(log.topics[2].data() + 12, 20);
    out.amount_decimal = "0";
    for (uint8_t byte : log.data) shift_in_byte(out.amount_decimal, byte);
    return out;
}

// --- Affine secp256k1 reference ---------------------------------------------

namespace {

// 256-bit values as 8 little-endian 32-bit limbs.
using U256 = std::array<uint32_t, 8>;

constexpr U256 kP = {0xfffffc2fu, 0xfffffffeu, 0xffffffffu, 0xffffffffu,
                     0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
constexpr U256 kN = {0xd0364141u, 0xbfd25e8cu, 0xaf48a03bu, 0xbaaedce6u,
                     0xfffffffeu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
constexpr U256 kGx = {0x16f81798u, 0x59f2815bu, 0x2dce28d9u, 0x029bfcdbu,
                      0xce870b07u, 0x55a06295u, 0xf9dcbbacu, 0x79be667eu};
constexpr U256 kGy = {0xfb10d4b8u, 0x9c47d08fu, 0xa6855419u, 0xfd17b448u,
                      0x0e1108a8u, 0x5da4fbfcu, 0x26a3c465u, 0x483ada77u};

int compare(const U256& a, const U256& b) {
    for (int i = 7; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

bool is_zero(const U256& a) {
    return std::all_of(a.begin(), a.end(), [](uint32_t v) { return v == 0; });
}

// a += b, returns carry.
uint32_t add_raw(U256& a, const U256& b) {
    uint64_t carry = 0;
    for (int i = 0; i < 8; ++i) {
        carry += static_cast<uint64_t>(a[i]) + b[i];
        a[i] = static_cast<uint32_t>(carry);
        carry >>= 32;
    }
    return static_cast<uint32_t>(carry);
}

// a -= b, requires a >= b.
void sub_raw(U256& a, const U256& b) {
    int64_t borrow = 0;
    for (int i = 0; i < 8; ++i) {
        int64_t diff = static_cast<int64_t>(a[i]) - b[i] - borrow;
        borrow = diff < 0;
        if (diff < 0) diff += (1LL << 32);
        a[i] = static_cast<uint32_t>(diff);
    }
}

U256 add_mod(const U256& a, const U256& b) {
    U256 out = a;
    const uint32_t carry = add_raw(out, b);
    if (carry || compare(out, kP) >= 0) sub_raw(out, kP);
    return out;
}

U256 sub_mod(const U256& a, const U256& b) {
    U256 out = a;
    if (compare(a, b) < 0) add_raw(out, kP);
    sub_raw(out, b);
    return out;
}

// Half of a mod p (a even: a/2; a odd: (a+p)/2).
U256 half_mod(const U256& a) {
    U256 out = a;
    uint32_t carry = 0;
    if (out[0] & 1) carry = add_raw(out, kP);
    for (int i = 0; i < 8; ++i) {
        out[i] >>= 1;
        if (i < 7) out[i] |= out[i + 1] << 31;
    }
    if (carry) out[7] |= 0x80000000u;
    return out;
}

// Schoolbook product then bitwise long division by p.
U256 mul_mod(const U256& a, const U256& b) {
    std::array<uint32_t, 16> wide{};
    for (int i = 0; i < 8; ++i) {
        uint64_t carry = 0;
        for (int j = 0; j < 8; ++j) {
            carry += static_cast<uint64_t>(a[i]) * b[j] + wide[i + j];
            wide[i + j] = static_cast<uint32_t>(carry);
            carry >>= 32;
        }
        wide[i + 8] = static_cast<uint32_t>(carry);
    }

    // remainder = wide mod p, one bit at a time from the top.
    U256 remainder{};
    for (int bit = 511; bit >= 0; --bit) {
        // remainder <<= 1
        uint32_t top = remainder[7] >> 31;
        for (int i = 7; i > 0; --i) remainder[i] = (remainder[i] << 1) | (remainder[i - 1] >> 31);
        remainder[0] <<= 1;
        remainder[0] |= (wide[bit / 32] >> (bit % 32)) & 1;
        // top can only be set if remainder >= 2^255; p > 2^255 so subtract.
        if (top || compare(remainder, kP) >= 0) sub_raw(remainder, kP);
    }
    return remainder;
}

// Binary extended gcd inversion mod p.
U256 inv_mod(const U256& a) {
    U256 u = a, v = kP;
    U256 x1 = {1, 0, 0, 0, 0, 0, 0, 0};
    U256 x2 = {};
    const U256 one = {1, 0, 0, 0, 0, 0, 0, 0};
    while (compare(u, one) != 0 && compare(v, one) != 0) {
        while ((u[0] & 1) == 0) {
            for (int i = 0; i < 7; ++i) u[i] = (u[i] >> 1) | (u[i + 1] << 31);
            u[7] >>= 1;
            x1 = half_mod(x1);
        }
        while ((v[0] & 1) == 0) {
            for (int i = 0; i < 7; ++i) v[i] = (v[i] >> 1) | (v[i + 1] << 31);
            v[7] >>= 1;
            x2 = half_mod(x2);
        }
        if (compare(u, v) >= 0) {
            sub_raw(u, v);
            x1 = sub_mod(x1, x2);
        } else {
            sub_raw(v, u);
            x2 = sub_mod(x2, x1);
        }
    }
    return compare(u, one) == 0 ? x1 : x2;
}

struct RefPoint {
    U256 x{}, y{};
    bool infinity = true;
};

RefPoint ref_double(const RefPoint& p) {
    if (p.infinity || is_zero(p.y)) return {};
    // lambda = 3x^2 / 2y
    const U256 x2 = mul_mod(p.x, p.x);
    const U256 numerator = add_mod(add_mod(x2, x2), x2);
    const U256 lambda = mul_mod(numerator, inv_mod(add_mod(p.y, p.y)));
    RefPoint out;
    out.infinity = false;
    out.x = sub_mod(mul_mod(lambda, lambda), add_mod(p.x, p.x));
    out.y = sub_mod(mul_mod(lambda, sub_mod(p.x, out.x)), p.y);
    return out;
}

RefPoint ref_add(const RefPoint& p, const RefPoint& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    if (compare(p.x, q.x) == 0) {
        if (compare(p.y, q.y) == 0) return ref_double(p);
        return {};
    }
    const U256 lambda = mul_mod(sub_mod(q.y, p.y), inv_mod(sub_mod(q.x, p.x)));
    RefPoint out;
    out.infinity = false;
    out.x = sub_mod(sub_mod(mul_mod(lambda, lambda), p.x), q.x);
    out.y = sub_mod(mul_mod(lambda, sub_mod(p.x, out.x)), p.y);
    return out;
}

U256 from_be_bytes(const uint8_t* bytes) {
    U256 out{};
    for (int i = 0; i < 32; ++i) {
        out[(31 - i) / 4] |= static_cast<uint32_t>(bytes[i]) << (8 * ((31 - i) % 4));
    }
    return out;
}

void to_be_bytes(const U256& value, uint8_t* out) {
    for (int i = 0; i < 32; ++i) {
        out[i] = static_cast<uint8_t>(value[(31 - i) / 4] >> (8 * ((31 - i) % 4)));
    }
}

}  // namespace

std::optional<std::array<uint8_t, 64>> pubkey_xy(const std::array<uint8_t, 32>& secret) {
    const U256 scalar = from_be_bytes(secret.data());
    if (is_zero(scalar) || compare(scalar, kN) >= 0) return std::nullopt;

    RefPoint base;
    base.infinity = false;
    base.x = kGx;
    base.y = kGy;

    RefPoint acc;
    for (int bit = 255; bit >= 0; --bit) {
        acc = ref_double(acc);
        if ((scalar[bit / 32] >> (bit % 32)) & 1) acc = ref_add(acc, base);
    }
    if (acc.infinity) return std::nullopt;

    std::array<uint8_t, 64> out;
    to_be_bytes(acc.x, out.data());
    to_be_bytes(acc.y, out.data() + 32);
    return out;
}

// --- Brute-force matcher -----------------------------------------------------

std::vector<std::optional<std::pair<Address, SimilarityScore>>> match_all(
    const AccountHistory& history, const LegitTokenRegistry& registry,
    const DetectorConfig& cfg) {
    using poisonguard::classify_transfer;
    using poisonguard::counterparty_of;
    using poisonguard::is_incoming;
    using poisonguard::is_legit_class;

    std::vector<std::optional<std::pair<Address, SimilarityScore>>> matches;
    for (const auto& record : history.transfers) {
        if (!is_incoming(record, history.owner)) {
            matches.push_back(std::nullopt);
            continue;
        }
        const auto cls = classify_transfer(record, registry, cfg);
        if (is_legit_class(cls)) {
            matches.push_back(std::nullopt);
            continue;
        }

        // Every qualifying counterparty with its earliest qualifying block,
        // recomputed from scratch for this one record.
        std::map<Address, uint64_t> first_block;
        for (const auto& other : history.transfers) {
            if (cfg.match_window == poisonguard::MatchWindow::PastOnly &&
                other.block >= record.block) {
                continue;
            }
            const bool legit = !is_incoming(other, history.owner) ||
                               is_legit_class(classify_transfer(other, registry, cfg));
            if (!legit) continue;
            const Address counterparty = counterparty_of(other, history.owner);
            const auto it = first_block.find(counterparty);
            if (it == first_block.end() || other.block < it->second) {
                first_block[counterparty] = other.block;
            }
        }

        struct Scored {
            unsigned total;
            uint64_t block;
            Address address;
            SimilarityScore score;
        };
        std::vector<Scored> qualifying;
        for (const auto& [address, block] : first_block) {
            const SimilarityScore score = poisonguard::similarity(record.from, address);
            if (poisonguard::is_lookalike(score, cfg.lookalike)) {
                qualifying.push_back(
                    {score.prefix_match + score.suffix_match, block, address, score});
            }
        }
        if (qualifying.empty()) {
            matches.push_back(std::nullopt);
            continue;
        }
        std::sort(qualifying.begin(), qualifying.end(), [](const Scored& a, const Scored& b) {
            if (a.total != b.total) return a.total > b.total;
            if (a.block != b.block) return a.block < b.block;
            return a.address < b.address;
        });
        matches.push_back(std::make_pair(qualifying.front().address, qualifying.front().score));
    }
    return matches;
}

// --- Random histories --------------------------------------------------------

Address random_address(std::mt19937_64& rng) {
    Address address;
    for (auto& byte : address.bytes) byte = static_cast<uint8_t>(rng());
    return address;
}

Address mutate_lookalike(std::mt19937_64& rng, const Address& base, unsigned prefix,
                         unsigned suffix) {
    std::string hex = poisonguard::lower_hex(base);
    static const char* digits = "0123456789abcdef";
    for (unsigned i = prefix; i < 40 - suffix; ++i) {
        hex[i] = digits[rng() % 16];
    }
    return poisonguard::address_from_hex(hex);
}

AccountHistory random_history(std::mt19937_64& rng, size_t max_transfers,
                              const LegitTokenRegistry& registry) {
    using poisonguard::BigUint;
    using poisonguard::NativeAsset;
    using poisonguard::TokenAsset;
    using poisonguard::TransferRecord;

    AccountHistory history;
    history.owner = random_address(rng);

    std::vector<Address> partners;
    for (int i = 0; i < 4; ++i) partners.push_back(random_address(rng));

    // Attackers imitating the partners at and below the default thresholds.
    std::vector<Address> attackers;
    for (const Address& partner : partners) {
        attackers.push_back(mutate_lookalike(rng, partner, 4, 4));
        attackers.push_back(mutate_lookalike(rng, partner, 3, 4));  // under threshold
        attackers.push_back(mutate_lookalike(rng, partner, 5, 5));
    }
    attackers.push_back(random_address(rng));

    const Address usdt = *registry.lookup("USDT").begin();
    const TokenAsset legit_usdt{usdt, "USDT", 6};
    const TokenAsset fake_usdt{random_address(rng), "USDT", 6};
    const TokenAsset fake_eth{random_address(rng), "ETH", 18};
    const TokenAsset unknown{random_address(rng), "WXYZ", 8};

    const size_t count = 1 + rng() % max_transfers;
    for (size_t i = 0; i < count; ++i) {
        TransferRecord record;
        record.block = 1'000'000 + rng() % 300;  // collisions intended
        const bool incoming = rng() % 8 != 0;
        const Address other = (rng() % 2) ? partners[rng() % partners.size()]
                                          : attackers[rng() % attackers.size()];
        record.from = incoming ? other : history.owner;
        record.to = incoming ? history.owner : other;

        switch (rng() % 5) {
            case 0: record.asset = NativeAsset{}; break;
            case 1: record.asset = legit_usdt; break;
            case 2: record.asset = fake_usdt; break;
            case 3: record.asset = fake_eth; break;
            default: record.asset = unknown; break;
        }
        if (!poisonguard::is_native(record.asset)) {
            record.log_index = static_cast<uint32_t>(rng() % 64);
        }

        switch (rng() % 4) {
            case 0: record.amount = BigUint(0); break;
            case 1: record.amount = BigUint(1 + rng() % 1000); break;  // dusty
            case 2:
                record.amount = BigUint::pow10(poisonguard::asset_decimals(record.asset));
                break;
            default:
                record.amount = BigUint(rng());
                break;
        }

        const poisonguard::Hash256 hash =
            poisonguard::keccak256("history-record-" + std::to_string(rng()));
        record.tx_hash = hash;
        history.transfers.push_back(std::move(record));
    }
    poisonguard::sort_history(history);
    return history;
}

}  // namespace oracles
