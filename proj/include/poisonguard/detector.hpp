#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poisonguard/address.hpp"
#include "poisonguard/bigint.hpp"
#include "poisonguard/transfer.hpp"

namespace poisonguard {

enum class TransferClass {
    LegitNative,
    LegitToken,
    ZeroValue,
    DustValue,
    FakeToken,
    FakeTokenZero,
};

std::string_view to_string(TransferClass cls);
std::optional<TransferClass> transfer_class_from_string(std::string_view text);

inline bool is_legit_class(TransferClass cls) {
    return cls == TransferClass::LegitNative || cls == TransferClass::LegitToken;
}
inline bool is_fake_class(TransferClass cls) {
    return cls == TransferClass::FakeToken || cls == TransferClass::FakeTokenZero;
}

// Per-transfer ruling. Zero/dust transfers are phishing only when a prior
// legitimate counterparty look-alike anchors them; fake tokens are phishing
// no matter what, since the genuine asset cannot emit them.
struct Verdict {
    TransferRecord record;
    TransferClass cls = TransferClass::LegitNative;
    std::optional<Address> matched_counterparty;
    std::optional<SimilarityScore> score;
    bool phishing = false;
};

enum class MatchWindow {
    PastOnly,      // attacker reacts to an observed transfer
    PastAndFuture  // attacker pre-poisons; match across the whole history
};

struct DetectorConfig {
    // Base-unit dust ceilings keyed by normalized symbol; native coin under
    // its registry symbol. Amounts at or below the ceiling are dust.
    std::map<std::string, BigUint> dust_thresholds;
    LookalikeThresholds lookalike;
    MatchWindow match_window = MatchWindow::PastOnly;

    static DetectorConfig defaults();
};

// Display symbol used for threshold lookup and feed grouping.
std::string asset_symbol(const AssetKind& asset, const LegitTokenRegistry& registry);

// Total and deterministic: every transfer maps to exactly one class.
TransferClass classify_transfer(const TransferRecord& record,
                                const LegitTokenRegistry& registry,
                                const DetectorConfig& cfg);

// Scans legitimate-class counterparties (blocks < at_block under PastOnly)
// and returns the look-alike maximizing prefix+suffix match. Ties break to
// the earlier block, then the lexicographically smaller address.
std::optional<std::pair<Address, SimilarityScore>> match_lookalike(
    const Address& suspect, const AccountHistory& history, uint64_t at_block,
    const LegitTokenRegistry& registry, const DetectorConfig& cfg);

// One verdict per transfer in history order. Outgoing transfers pass through
// as legitimate; incoming transfers are classified and matched.
std::vector<Verdict> analyze_history(const AccountHistory& history,
                                     const LegitTokenRegistry& registry,
                                     const DetectorConfig& cfg);

}  // namespace poisonguard
