#include "poisonguard/evaluator.hpp"

#include <algorithm>

#include "json.hpp"
#include "poisonguard/hex.hpp"

namespace poisonguard {

using nlohmann::json;

namespace {

std::optional<DisplayState> state_of(const VisibleSet& visible, const TransferKey& key) {
    const auto it = visible.find(key);
    if (it == visible.end()) return std::nullopt;
    return it->second;
}

// Phishing transfers bucket as (zero | dust | fake) x (native | token), with
// fakes bucketed by the asset they claim to be. The zero-amount fake variant
// counts toward the fake bucket of its claimed asset.
struct PhishingBucket {
    enum Kind { Zero, Dust, Fake } kind;
    bool native_side;

    friend auto operator<=>(const PhishingBucket&, const PhishingBucket&) = default;
};

std::optional<PhishingBucket> bucket_of(const Verdict& verdict,
                                        const std::string& native_symbol) {
    bool native_side = is_native(verdict.record.asset);
    if (const TokenAsset* token = as_token(verdict.record.asset)) {
        native_side = normalize_symbol(token->symbol_claim) == native_symbol;
    }
    switch (verdict.cls) {
        case TransferClass::ZeroValue: return PhishingBucket{PhishingBucket::Zero, native_side};
        case TransferClass::DustValue: return PhishingBucket{PhishingBucket::Dust, native_side};
        case TransferClass::FakeToken:
        case TransferClass::FakeTokenZero:
            return PhishingBucket{PhishingBucket::Fake, native_side};
        default: return std::nullopt;
    }
}

}  // namespace

int score_usability(const VisibleSet& visible, const std::vector<Verdict>& ground_truth) {
    bool native_visible = false;
    bool token_visible = false;
    for (const Verdict& verdict : ground_truth) {
        if (!is_legit_class(verdict.cls)) continue;
        if (!state_of(visible, key_of(verdict.record))) continue;
        (verdict.cls == TransferClass::LegitNative ? native_visible : token_visible) = true;
    }
    return (native_visible ? 1 : 0) + (token_visible ? 1 : 0);
}

int score_risk(const VisibleSet& visible, const std::vector<Verdict>& ground_truth) {
    // The native symbol only matters for bucketing fake claims; ground truth
    // produced by this toolkit always claims "ETH" or a registered symbol.
    const std::string native_symbol = "ETH";

    std::set<PhishingBucket> buckets_present;
    std::set<PhishingBucket> buckets_shown;
    bool fake_shown = false;
    bool fake_conditional = false;
    bool zero_shown = false;
    bool dust_shown = false;

    for (const Verdict& verdict : ground_truth) {
        const auto bucket = bucket_of(verdict, native_symbol);
        if (!bucket) continue;
        buckets_present.insert(*bucket);
        const auto state = state_of(visible, key_of(verdict.record));
        if (!state) continue;
        if (*state == DisplayState::Shown) {
            buckets_shown.insert(*bucket);
            if (bucket->kind == PhishingBucket::Fake) fake_shown = true;
            if (bucket->kind == PhishingBucket::Zero) zero_shown = true;
            if (bucket->kind == PhishingBucket::Dust) dust_shown = true;
        } else if (bucket->kind == PhishingBucket::Fake) {
            // Flagged or conditionally shown fakes are exposed, but less so.
            fake_conditional = true;
        }
    }

    if (!buckets_present.empty() && buckets_shown == buckets_present) return 4;
    if (fake_shown) return 3;
    if (zero_shown || fake_conditional) return 2;
    if (dust_shown) return 1;
    return 0;
}

ScoreCard make_scorecard(const VisibleSet& visible,
                         const std::vector<Verdict>& ground_truth) {
    ScoreCard card;
    card.usability = score_usability(visible, ground_truth);
    card.risk = card.usability == 0 ? 0 : score_risk(visible, ground_truth);

    for (const Verdict& verdict : ground_truth) {
        const TransferKey key = key_of(verdict.record);
        const auto state = state_of(visible, key);
        if (!state) continue;
        if (is_legit_class(verdict.cls) && card.usability > 0) {
            card.evidence.push_back({key, *state, "usability: legitimate transfer visible"});
            continue;
        }
        if (card.risk == 0) continue;
        const bool fake = is_fake_class(verdict.cls);
        switch (card.risk) {
            case 4:
                if (*state == DisplayState::Shown) {
                    card.evidence.push_back({key, *state, "risk 4: phishing transfer shown"});
                }
                break;
            case 3:
                if (fake && *state == DisplayState::Shown) {
                    card.evidence.push_back({key, *state, "risk 3: fake transfer shown"});
                }
                break;
            case 2:
                if (verdict.cls == TransferClass::ZeroValue &&
                    *state == DisplayState::Shown) {
                    card.evidence.push_back({key, *state, "risk 2: zero-value transfer shown"});
                } else if (fake && *state != DisplayState::Shown) {
                    card.evidence.push_back(
                        {key, *state, "risk 2: fake transfer conditionally displayed"});
                }
                break;
            case 1:
                if (verdict.cls == TransferClass::DustValue &&
                    *state == DisplayState::Shown) {
                    card.evidence.push_back({key, *state, "risk 1: dust transfer shown"});
                }
                break;
            default: break;
        }
    }
    return card;
}

std::string_view to_string(FilterOrigin origin) {
    switch (origin) {
        case FilterOrigin::Provider: return "provider";
        case FilterOrigin::Wallet: return "wallet";
        case FilterOrigin::NotFiltered: return "notFiltered";
        case FilterOrigin::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

AttributionResult attribute_filtering(
    const std::vector<Verdict>& ground_truth,
    const std::optional<std::set<TransferKey>>& provider_view,
    const VisibleSet& displayed) {
    AttributionResult result;
    std::set<TransferKey> known;
    for (const Verdict& verdict : ground_truth) {
        const TransferKey key = key_of(verdict.record);
        known.insert(key);
        if (!provider_view) {
            result.origins[key] = FilterOrigin::Indeterminate;
        } else if (!provider_view->count(key)) {
            result.origins[key] = FilterOrigin::Provider;
        } else if (!displayed.count(key)) {
            result.origins[key] = FilterOrigin::Wallet;
        } else {
            result.origins[key] = FilterOrigin::NotFiltered;
        }
    }
    if (provider_view) {
        for (const TransferKey& key : *provider_view) {
            if (!known.count(key)) {
                result.warnings.push_back("provider returned unknown transfer " +
                                          to_hex(key.tx_hash));
            }
        }
    }
    return result;
}

std::string diagnose_zero_usability(const ProviderDiagnosis& probe) {
    switch (probe.kind) {
        case DiagnosisKind::Ok:
            return "provider responded with data; fault is wallet-side";
        case DiagnosisKind::NotFound: return "provider endpoint not found (HTTP 404)";
        case DiagnosisKind::Forbidden: return "provider rejected request (HTTP 403)";
        case DiagnosisKind::EmptyBody:
            return "provider returned empty payload (HTTP 200)";
        case DiagnosisKind::RejectedRequest:
            return "provider rejected request parameters (" +
                   (probe.detail.empty() ? std::string("error reply") : probe.detail) +
                   ")";
        case DiagnosisKind::Timeout: return "provider did not respond (timeout)";
        case DiagnosisKind::MalformedPayload:
            return "provider response could not be parsed";
    }
    return "unknown provider state";
}

std::string scorecard_to_json(const ScoreCard& card,
                              const std::optional<AttributionResult>& attribution) {
    json doc;
    doc["usability"] = card.usability;
    doc["risk"] = card.risk;
    json evidence = json::array();
    for (const EvidenceItem& item : card.evidence) {
        json entry;
        entry["hash"] = to_hex(item.key.tx_hash);
        if (item.key.log_index) entry["logIndex"] = *item.key.log_index;
        entry["state"] = std::string(to_string(item.state));
        entry["rule"] = item.rule;
        evidence.push_back(std::move(entry));
    }
    doc["evidence"] = std::move(evidence);
    if (attribution) {
        json origins = json::object();
        for (const auto& [key, origin] : attribution->origins) {
            std::string id = to_hex(key.tx_hash);
            if (key.log_index) id += ":" + std::to_string(*key.log_index);
            origins[id] = std::string(to_string(origin));
        }
        doc["attribution"] = std::move(origins);
    }
    if (card.diagnosis) doc["diagnosis"] = *card.diagnosis;
    return doc.dump(2) + "\n";
}

}  // namespace poisonguard
