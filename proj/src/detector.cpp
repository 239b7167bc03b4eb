#include "poisonguard/detector.hpp"

#include <algorithm>

namespace poisonguard {

std::string_view to_string(TransferClass cls) {
    switch (cls) {
        case TransferClass::LegitNative: return "legitNative";
        case TransferClass::LegitToken: return "legitToken";
        case TransferClass::ZeroValue: return "zeroValue";
        case TransferClass::DustValue: return "dustValue";
        case TransferClass::FakeToken: return "fakeToken";
        case TransferClass::FakeTokenZero: return "fakeTokenZero";
    }
    return "unknown";
}

std::optional<TransferClass> transfer_class_from_string(std::string_view text) {
    for (TransferClass cls :
         {TransferClass::LegitNative, TransferClass::LegitToken, TransferClass::ZeroValue,
          TransferClass::DustValue, TransferClass::FakeToken, TransferClass::FakeTokenZero}) {
        if (to_string(cls) == text) return cls;
    }
    return std::nullopt;
}

DetectorConfig DetectorConfig::defaults() {
    DetectorConfig cfg;
    // 0.0001 ETH and 0.1 USDT: above the dust amounts attackers actually use
    // and below any plausible intentional payment at today's fees.
    cfg.dust_thresholds["ETH"] = BigUint::pow10(14);
    cfg.dust_thresholds["USDT"] = BigUint::pow10(5);
    return cfg;
}

std::string asset_symbol(const AssetKind& asset, const LegitTokenRegistry& registry) {
    if (const TokenAsset* token = as_token(asset)) {
        return normalize_symbol(token->symbol_claim);
    }
    return registry.native_symbol();
}

TransferClass classify_transfer(const TransferRecord& record,
                                const LegitTokenRegistry& registry,
                                const DetectorConfig& cfg) {
    if (const TokenAsset* token = as_token(record.asset)) {
        const std::string claim = normalize_symbol(token->symbol_claim);
        const bool impersonates_native = (claim == registry.native_symbol());
        const bool impersonates_token = registry.is_registered_symbol(claim) &&
                                        !registry.lookup(claim).count(token->contract);
        if (impersonates_native || impersonates_token) {
            return record.amount.is_zero() ? TransferClass::FakeTokenZero
                                           : TransferClass::FakeToken;
        }
    }
    if (record.amount.is_zero()) return TransferClass::ZeroValue;

    const auto threshold = cfg.dust_thresholds.find(asset_symbol(record.asset, registry));
    if (threshold != cfg.dust_thresholds.end() && record.amount <= threshold->second) {
        return TransferClass::DustValue;
    }
    return is_native(record.asset) ? TransferClass::LegitNative : TransferClass::LegitToken;
}

namespace {

// Legitimate counterparty with the block where it first qualified.
struct Candidate {
    Address address;
    uint64_t first_block;
};

bool is_legit_transfer(const TransferRecord& record, const Address& owner,
                       const LegitTokenRegistry& registry, const DetectorConfig& cfg) {
    // Outgoing transfers are the owner's own actions; their recipients are
    // legitimate counterparties by definition.
    if (!is_incoming(record, owner)) return true;
    return is_legit_class(classify_transfer(record, registry, cfg));
}

std::optional<std::pair<Address, SimilarityScore>> best_match(
    const Address& suspect, const std::vector<Candidate>& candidates,
    const LookalikeThresholds& thresholds) {
    const Candidate* best = nullptr;
    SimilarityScore best_score;
    for (const Candidate& candidate : candidates) {
        const SimilarityScore score = similarity(suspect, candidate.address);
        if (!is_lookalike(score, thresholds)) continue;
        if (best) {
            const unsigned total = score.prefix_match + score.suffix_match;
            const unsigned best_total = best_score.prefix_match + best_score.suffix_match;
            if (total < best_total) continue;
            if (total == best_total) {
                if (candidate.first_block > best->first_block) continue;
                if (candidate.first_block == best->first_block &&
                    !(candidate.address < best->address)) {
                    continue;
                }
            }
        }
        best = &candidate;
        best_score = score;
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->address, best_score);
}

// Deduplicated qualifying counterparties, keyed by first qualifying block.
class CandidateSet {
public:
    void add(const Address& address, uint64_t block) {
        if (seen_.insert(address).second) {
            candidates_.push_back({address, block});
        }
    }
    const std::vector<Candidate>& all() const { return candidates_; }

private:
    std::set<Address> seen_;
    std::vector<Candidate> candidates_;
};

}  // namespace

std::optional<std::pair<Address, SimilarityScore>> match_lookalike(
    const Address& suspect, const AccountHistory& history, uint64_t at_block,
    const LegitTokenRegistry& registry, const DetectorConfig& cfg) {
    CandidateSet candidates;
    for (const TransferRecord& record : history.transfers) {
        if (cfg.match_window == MatchWindow::PastOnly && record.block >= at_block) {
            continue;
        }
        if (!is_legit_transfer(record, history.owner, registry, cfg)) continue;
        candidates.add(counterparty_of(record, history.owner), record.block);
    }
    return best_match(suspect, candidates.all(), cfg.lookalike);
}

std::vector<Verdict> analyze_history(const AccountHistory& history,
                                     const LegitTokenRegistry& registry,
                                     const DetectorConfig& cfg) {
    std::vector<Verdict> verdicts;
    verdicts.reserve(history.transfers.size());

    CandidateSet committed;  // legit counterparties at blocks strictly below
    if (cfg.match_window == MatchWindow::PastAndFuture) {
        for (const TransferRecord& record : history.transfers) {
            if (is_legit_transfer(record, history.owner, registry, cfg)) {
                committed.add(counterparty_of(record, history.owner), record.block);
            }
        }
    }

    size_t i = 0;
    while (i < history.transfers.size()) {
        // Process one block at a time so same-block transfers cannot anchor
        // each other under PastOnly.
        const uint64_t block = history.transfers[i].block;
        size_t end = i;
        while (end < history.transfers.size() && history.transfers[end].block == block) {
            ++end;
        }

        for (size_t j = i; j < end; ++j) {
            const TransferRecord& record = history.transfers[j];
            Verdict verdict;
            verdict.record = record;
            if (!is_incoming(record, history.owner)) {
                verdict.cls = is_native(record.asset) ? TransferClass::LegitNative
                                                      : TransferClass::LegitToken;
            } else {
                verdict.cls = classify_transfer(record, registry, cfg);
                if (!is_legit_class(verdict.cls)) {
                    auto match = best_match(record.from, committed.all(), cfg.lookalike);
                    if (match) {
                        verdict.matched_counterparty = match->first;
                        verdict.score = match->second;
                    }
                    verdict.phishing = is_fake_class(verdict.cls) || match.has_value();
                }
            }
            verdicts.push_back(std::move(verdict));
        }

        if (cfg.match_window == MatchWindow::PastOnly) {
            for (size_t j = i; j < end; ++j) {
                const TransferRecord& record = history.transfers[j];
                if (is_legit_transfer(record, history.owner, registry, cfg)) {
                    committed.add(counterparty_of(record, history.owner), record.block);
                }
            }
        }
        i = end;
    }
    return verdicts;
}

}  // namespace poisonguard
