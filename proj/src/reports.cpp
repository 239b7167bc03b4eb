#include "poisonguard/reports.hpp"

#include "json.hpp"
#include "poisonguard/errors.hpp"
#include "poisonguard/hex.hpp"

namespace poisonguard {

using nlohmann::json;

std::string verdicts_to_json(const std::vector<Verdict>& verdicts) {
    json doc = json::array();
    for (const Verdict& verdict : verdicts) {
        json entry;
        entry["hash"] = to_hex(verdict.record.tx_hash);
        if (verdict.record.log_index) entry["logIndex"] = *verdict.record.log_index;
        entry["class"] = std::string(to_string(verdict.cls));
        entry["phishing"] = verdict.phishing;
        if (verdict.matched_counterparty) {
            entry["matchedCounterparty"] = checksum_encode(*verdict.matched_counterparty);
        }
        if (verdict.score) {
            entry["prefixMatch"] = verdict.score->prefix_match;
            entry["suffixMatch"] = verdict.score->suffix_match;
        }
        doc.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

std::string snapshot_to_json(const FeedSnapshot& snapshot,
                             const LegitTokenRegistry& registry) {
    json entries = json::object();
    for (const auto& [name, items] : snapshot.entries) {
        json list = json::array();
        for (const FeedItem& item : items) {
            json entry;
            entry["hash"] = to_hex(item.record.tx_hash);
            if (item.record.log_index) entry["logIndex"] = *item.record.log_index;
            entry["state"] = std::string(to_string(item.state));
            entry["fromShort"] =
                shorten(item.record.from, snapshot.short_prefix, snapshot.short_suffix)
                    .text;
            entry["toShort"] =
                shorten(item.record.to, snapshot.short_prefix, snapshot.short_suffix)
                    .text;
            entry["amount"] = render_amount(item.record.amount,
                                            asset_decimals(item.record.asset));
            entry["symbol"] = asset_symbol(item.record.asset, registry);
            list.push_back(std::move(entry));
        }
        entries[name] = std::move(list);
    }
    json doc;
    doc["design"] = std::string(to_string(snapshot.design));
    doc["owner"] = checksum_encode(snapshot.owner);
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

TranscribedSnapshot parse_snapshot_json(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw SchemaError("/", "not valid JSON");
    if (!doc.is_object()) throw SchemaError("/", "expected object");

    TranscribedSnapshot snapshot;
    if (doc.contains("design")) {
        if (!doc["design"].is_string()) throw SchemaError("/design", "expected string");
        const auto design = entry_design_from_string(doc["design"].get<std::string>());
        if (!design) throw SchemaError("/design", "unknown design");
        snapshot.design = *design;
    }
    if (!doc.contains("entries") || !doc["entries"].is_object()) {
        throw SchemaError("/entries", "expected object");
    }
    for (const auto& [name, list] : doc["entries"].items()) {
        const std::string base = "/entries/" + name;
        if (!list.is_array()) throw SchemaError(base, "expected array");
        auto& items = snapshot.entries[name];
        for (size_t i = 0; i < list.size(); ++i) {
            const std::string location = base + "/" + std::to_string(i);
            const json& entry = list[i];
            if (!entry.is_object()) throw SchemaError(location, "expected object");
            if (!entry.contains("hash") || !entry["hash"].is_string()) {
                throw SchemaError(location + "/hash", "expected hash string");
            }
            if (!entry.contains("state") || !entry["state"].is_string()) {
                throw SchemaError(location + "/state", "expected state string");
            }
            TransferKey key;
            try {
                key.tx_hash = parse_hash256(entry["hash"].get<std::string>());
            } catch (const MalformedHex& e) {
                throw SchemaError(location + "/hash", e.what());
            }
            if (entry.contains("logIndex")) {
                if (!entry["logIndex"].is_number_unsigned()) {
                    throw SchemaError(location + "/logIndex",
                                      "expected non-negative integer");
                }
                key.log_index = entry["logIndex"].get<uint32_t>();
            }
            const auto state =
                display_state_from_string(entry["state"].get<std::string>());
            if (!state) throw SchemaError(location + "/state", "unknown display state");
            items.emplace_back(key, *state);
        }
    }
    return snapshot;
}

VisibleSet displayed_union(const TranscribedSnapshot& snapshot) {
    VisibleSet visible;
    for (const auto& [name, items] : snapshot.entries) {
        for (const auto& [key, state] : items) {
            if (state == DisplayState::Hidden) continue;
            auto [it, inserted] = visible.emplace(key, state);
            if (!inserted && visibility_rank(state) > visibility_rank(it->second)) {
                it->second = state;
            }
        }
    }
    return visible;
}

}  // namespace poisonguard
