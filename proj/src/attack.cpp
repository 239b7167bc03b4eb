#include "poisonguard/attack.hpp"

#include <atomic>
#include <cstring>
#include <map>
#include <mutex>
#include <thread>

#include "poisonguard/errors.hpp"
#include "poisonguard/secp256k1.hpp"

namespace poisonguard {

SearchStats SearchStats::make(uint64_t tried, std::chrono::nanoseconds elapsed) {
    SearchStats stats;
    stats.candidates_tried = tried;
    stats.elapsed = elapsed;
    const double seconds = std::chrono::duration<double>(elapsed).count();
    stats.throughput = seconds > 0 ? static_cast<double>(tried) / seconds : 0.0;
    return stats;
}

KeyPair derive_keypair(const std::array<uint8_t, 32>& secret) {
    if (!secp::scalar_is_valid(secret)) {
        throw Error("secret scalar out of range for secp256k1");
    }
    const secp::AffinePoint pub = secp::mul_base(secret);
    const auto encoded = secp::serialize_uncompressed(pub);
    const Hash256 digest = keccak256(std::span<const uint8_t>(encoded.data(), 64));

    KeyPair pair;
    pair.secret = secret;
    std::copy(digest.begin() + 12, digest.end(), pair.address.bytes.begin());
    return pair;
}

KeyPair keypair_for_index(const Hash256& key, uint64_t index) {
    for (uint64_t attempt = 0;; ++attempt) {
        const Hash256 secret = keyed_block(key, "candidate", index, attempt);
        if (secp::scalar_is_valid(secret)) return derive_keypair(secret);
        // P(invalid) ~ 2^-128; the loop is for correctness, not for use.
    }
}

namespace {

Hash256 stream_key(const SearchOptions& options) {
    if (options.seed) return expand_seed(*options.seed);
    return KeccakRng().key();
}

unsigned effective_workers(const SearchOptions& options) {
    return options.workers == 0 ? 1 : options.workers;
}

}  // namespace

std::optional<VanityResult> targeted_search(const Address& target, unsigned min_prefix,
                                            unsigned min_suffix, uint64_t budget,
                                            const SearchOptions& options) {
    if (min_prefix + min_suffix > 40) {
        throw LengthOverflow("prefix + suffix thresholds exceed 40 hex chars");
    }
    const Hash256 key = stream_key(options);
    const LookalikeThresholds thresholds{min_prefix, min_suffix};
    const auto start = std::chrono::steady_clock::now();

    const unsigned workers = effective_workers(options);
    constexpr uint64_t kChunk = 256;
    const uint64_t chunk_count = (budget + kChunk - 1) / kChunk;

    std::atomic<uint64_t> next_chunk{0};
    std::atomic<uint64_t> tried{0};
    std::atomic<uint64_t> best_hit{UINT64_MAX};  // global candidate index
    std::mutex result_mutex;
    std::optional<KeyPair> winner;

    const auto scan = [&] {
        for (;;) {
            const uint64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunk_count) return;
            // Chunks are handed out in order, so once a hit exists every
            // chunk below it is already owned by some worker and will be
            // scanned to completion. Later chunks cannot improve the result.
            if (chunk * kChunk >= best_hit.load()) return;

            const uint64_t begin = chunk * kChunk;
            const uint64_t end = std::min(begin + kChunk, budget);
            uint64_t scanned = 0;
            for (uint64_t index = begin; index < end; ++index) {
                const KeyPair candidate = keypair_for_index(key, index);
                ++scanned;
                if (is_lookalike(candidate.address, target, thresholds)) {
                    uint64_t expected = best_hit.load();
                    while (index < expected &&
                           !best_hit.compare_exchange_weak(expected, index)) {
                    }
                    if (index <= best_hit.load()) {
                        const std::lock_guard<std::mutex> lock(result_mutex);
                        if (index == best_hit.load()) winner = candidate;
                    }
                    break;  // later indices in this chunk cannot beat `index`
                }
            }
            tried.fetch_add(scanned);
        }
    };

    if (workers == 1) {
        scan();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(scan);
        for (std::thread& thread : pool) thread.join();
    }

    const auto elapsed = std::chrono::steady_clock::now() - start;
    if (!winner) return std::nullopt;
    return VanityResult{*winner, SearchStats::make(tried.load(), elapsed)};
}

PairSearchResult pair_search(uint64_t n, unsigned min_prefix, unsigned min_suffix,
                             const SearchOptions& options) {
    // Unlike the targeted search, overlapping segments are fine here: (40, 40)
    // just means "identical", which distinct keys never are.
    if (min_prefix > 40 || min_suffix > 40) {
        throw LengthOverflow("thresholds exceed 40 hex chars");
    }
    if (n < 2) throw Error("pair search needs at least two keys");

    const Hash256 key = stream_key(options);
    const LookalikeThresholds thresholds{min_prefix, min_suffix};
    const auto start = std::chrono::steady_clock::now();

    std::vector<KeyPair> keys(n);
    const unsigned workers = effective_workers(options);
    if (workers == 1) {
        for (uint64_t i = 0; i < n; ++i) keys[i] = keypair_for_index(key, i);
    } else {
        std::atomic<uint64_t> next{0};
        const auto generate = [&] {
            for (;;) {
                const uint64_t i = next.fetch_add(1);
                if (i >= n) return;
                keys[i] = keypair_for_index(key, i);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(generate);
        for (std::thread& thread : pool) thread.join();
    }

    // Index by the (prefix, suffix) nibble pair: two addresses qualify only
    // if both segments agree exactly, so every qualifying pair shares a
    // bucket and the expected work is linear in n.
    std::map<std::string, std::vector<uint64_t>> buckets;
    for (uint64_t i = 0; i < n; ++i) {
        const std::string hex = lower_hex(keys[i].address);
        std::string bucket_key = hex.substr(0, min_prefix);
        bucket_key += '|';
        bucket_key += hex.substr(40 - min_suffix);
        buckets[bucket_key].push_back(i);
    }

    PairSearchResult result;
    for (const auto& [bucket_key, members] : buckets) {
        for (size_t a = 0; a < members.size(); ++a) {
            for (size_t b = a + 1; b < members.size(); ++b) {
                const uint64_t i = members[a];
                const uint64_t j = members[b];
                const SimilarityScore score =
                    similarity(keys[i].address, keys[j].address);
                if (!is_lookalike(score, thresholds)) continue;
                result.pairs.push_back({keys[i], keys[j], score, i, j});
            }
        }
    }
    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const LookalikePair& a, const LookalikePair& b) {
                  return std::tie(a.first_index, a.second_index) <
                         std::tie(b.first_index, b.second_index);
              });

    const auto elapsed = std::chrono::steady_clock::now() - start;
    result.stats = SearchStats::make(n, elapsed);
    return result;
}

namespace {

Address synthetic_contract(std::string_view label) {
    const Hash256 digest = keccak256(label);
    Address address;
    std::copy(digest.begin() + 12, digest.end(), address.bytes.begin());
    return address;
}

Hash256 synthetic_tx_hash(const TransferRecord& record) {
    Keccak256 hasher;
    hasher.update(std::string_view("poisonguard.tx"));
    uint8_t block_be[8];
    for (int i = 0; i < 8; ++i) {
        block_be[i] = static_cast<uint8_t>(record.block >> (8 * (7 - i)));
    }
    hasher.update(std::span<const uint8_t>(block_be, 8));
    hasher.update(std::span<const uint8_t>(record.from.bytes.data(), 20));
    hasher.update(std::span<const uint8_t>(record.to.bytes.data(), 20));
    hasher.update(record.amount.to_decimal());
    if (const TokenAsset* token = as_token(record.asset)) {
        hasher.update(std::span<const uint8_t>(token->contract.bytes.data(), 20));
        hasher.update(token->symbol_claim);
    } else {
        hasher.update(std::string_view("native"));
    }
    return hasher.finalize();
}

}  // namespace

Scenario build_scenario(const Address& victim, const Address& benign,
                        const Address& phishing, const LegitTokenRegistry& registry,
                        uint64_t base_block, uint64_t block_stride,
                        const LookalikeThresholds& thresholds) {
    if (!is_lookalike(benign, phishing, thresholds)) {
        throw NotLookalike("benign and phishing addresses must share " +
                           std::to_string(thresholds.min_prefix) + "+" +
                           std::to_string(thresholds.min_suffix) + " hex chars");
    }
    const std::set<Address>& usdt_contracts = registry.lookup("USDT");
    if (usdt_contracts.empty()) throw Error("registry has no USDT contract");
    const Address usdt = *usdt_contracts.begin();

    Scenario scenario;
    scenario.fake_usdt_contract = synthetic_contract("poisonguard.fake-usdt-contract");
    scenario.fake_eth_contract = synthetic_contract("poisonguard.fake-eth-contract");

    const TokenAsset legit_usdt{usdt, "USDT", kUsdtDecimals};
    const TokenAsset fake_usdt{scenario.fake_usdt_contract, "USDT", kUsdtDecimals};
    const TokenAsset fake_eth{scenario.fake_eth_contract, "ETH", kNativeDecimals};

    struct Row {
        Address from;
        std::optional<TokenAsset> asset;  // nullopt = native
        const char* amount;               // human units
    };
    const Row rows[10] = {
        {benign, std::nullopt, "0.001"},   // legitimate ETH payment
        {phishing, std::nullopt, "0"},     // zero-ETH
        {phishing, std::nullopt, "0.00001"},  // dust-ETH
        {phishing, fake_eth, "0.001"},     // fake-ETH, amount mirrors the real one
        {phishing, fake_eth, "0"},         // fake-ETH with zero amount
        {benign, legit_usdt, "10"},        // legitimate USDT payment
        {phishing, legit_usdt, "0"},       // zero-USDT
        {phishing, legit_usdt, "0.01"},    // dust-USDT
        {phishing, fake_usdt, "10"},       // fake-USDT, amount mirrors the real one
        {phishing, fake_usdt, "0"},        // fake-USDT with zero amount
    };

    scenario.history.owner = victim;
    for (size_t i = 0; i < 10; ++i) {
        TransferRecord record;
        record.block = base_block + block_stride * i;
        record.from = rows[i].from;
        record.to = victim;
        if (rows[i].asset) {
            record.asset = *rows[i].asset;
            record.log_index = 0;
        } else {
            record.asset = NativeAsset{};
        }
        record.amount = normalize_amount(rows[i].amount, asset_decimals(record.asset));
        record.tx_hash = synthetic_tx_hash(record);
        scenario.history.transfers.push_back(std::move(record));
    }
    sort_history(scenario.history);
    return scenario;
}

void register_scenario_metadata(const Scenario& scenario, LegitTokenRegistry& registry) {
    registry.add_metadata(scenario.fake_usdt_contract, "USDT", kUsdtDecimals);
    registry.add_metadata(scenario.fake_eth_contract, "ETH", kNativeDecimals);
}

RawLog fake_transfer_event(const Address& contract, const Address& from,
                           const Address& to, const BigUint& amount, uint64_t block,
                           uint32_t log_index) {
    const auto pad_address = [](const Address& address) {
        Hash256 topic{};
        std::copy(address.bytes.begin(), address.bytes.end(), topic.begin() + 12);
        return topic;
    };

    RawLog log;
    log.contract = contract;
    log.topics = {kTransferTopic, pad_address(from), pad_address(to)};
    log.data = amount.to_bytes_be(32);
    log.block = block;
    log.log_index = log_index;

    TransferRecord shape;
    shape.block = block;
    shape.from = from;
    shape.to = to;
    shape.amount = amount;
    shape.asset = TokenAsset{contract, "", 0};
    log.tx_hash = synthetic_tx_hash(shape);
    return log;
}

}  // namespace poisonguard
