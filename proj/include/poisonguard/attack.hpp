#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "poisonguard/address.hpp"
#include "poisonguard/bigint.hpp"
#include "poisonguard/ingest.hpp"
#include "poisonguard/rng.hpp"
#include "poisonguard/transfer.hpp"

namespace poisonguard {

struct KeyPair {
    std::array<uint8_t, 32> secret{};
    Address address;
};

struct SearchStats {
    uint64_t candidates_tried = 0;
    std::chrono::nanoseconds elapsed{0};
    double throughput = 0.0;  // candidates per second

    static SearchStats make(uint64_t tried, std::chrono::nanoseconds elapsed);
};

// secret * G -> keccak(x||y)[12..31]. Throws Error on an invalid scalar.
KeyPair derive_keypair(const std::array<uint8_t, 32>& secret);

// Candidate `index` of the deterministic key stream under `key`. The stream
// is index-addressable so parallel workers produce identical candidates.
KeyPair keypair_for_index(const Hash256& key, uint64_t index);

struct SearchOptions {
    std::optional<uint64_t> seed;  // deterministic stream; omit for entropy
    unsigned workers = 1;
};

struct VanityResult {
    KeyPair key;
    SearchStats stats;
};

// Generates candidates until one is a look-alike of `target` under
// (min_prefix, min_suffix) or the budget runs out. Deterministic for a fixed
// seed regardless of worker count: the winner is always the lowest-index
// qualifying candidate.
std::optional<VanityResult> targeted_search(const Address& target, unsigned min_prefix,
                                            unsigned min_suffix, uint64_t budget,
                                            const SearchOptions& options = {});

struct LookalikePair {
    KeyPair first;
    KeyPair second;
    SimilarityScore score;
    uint64_t first_index = 0;
    uint64_t second_index = 0;
};

struct PairSearchResult {
    std::vector<LookalikePair> pairs;  // ordered by (first_index, second_index)
    SearchStats stats;
};

// Generates n keys and returns every unordered look-alike pair among them.
// Pairs are found through a prefix+suffix bucket index, not by comparing all
// n^2 address pairs.
PairSearchResult pair_search(uint64_t n, unsigned min_prefix, unsigned min_suffix,
                             const SearchOptions& options = {});

// The canonical ten-transfer poisoning scenario: a legitimate ETH and USDT
// transfer from the benign address, and zero / dust / fake / zero-amount-fake
// variants of each from the phishing address.
struct Scenario {
    AccountHistory history;
    Address fake_usdt_contract;
    Address fake_eth_contract;
};

// Requires benign/phishing to be look-alikes, 4+4 by default; throws
// NotLookalike.
Scenario build_scenario(const Address& victim, const Address& benign,
                        const Address& phishing, const LegitTokenRegistry& registry,
                        uint64_t base_block = 1'000'000, uint64_t block_stride = 10,
                        const LookalikeThresholds& thresholds = {4, 4});

// Registers the scenario's fake contracts' claimed identities so decoded
// logs classify the way the fixture does.
void register_scenario_metadata(const Scenario& scenario, LegitTokenRegistry& registry);

// A well-formed ERC-20 Transfer event naming arbitrary sender, recipient and
// amount -- the behavior that makes fake-token contracts useful to attackers.
RawLog fake_transfer_event(const Address& contract, const Address& from,
                           const Address& to, const BigUint& amount,
                           uint64_t block = 0, uint32_t log_index = 0);

}  // namespace poisonguard
