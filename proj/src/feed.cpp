#include "poisonguard/feed.hpp"

#include <algorithm>

#include "poisonguard/errors.hpp"

namespace poisonguard {

std::string_view to_string(EntryDesign design) {
    switch (design) {
        case EntryDesign::OnePerCoin: return "onePerCoin";
        case EntryDesign::OneForAll: return "oneForAll";
        case EntryDesign::Hybrid: return "hybrid";
    }
    return "unknown";
}

std::string_view to_string(DisplayState state) {
    switch (state) {
        case DisplayState::Hidden: return "hidden";
        case DisplayState::Flagged: return "flagged";
        case DisplayState::ShownConditional: return "shownConditional";
        case DisplayState::Shown: return "shown";
    }
    return "unknown";
}

std::optional<EntryDesign> entry_design_from_string(std::string_view text) {
    for (EntryDesign d :
         {EntryDesign::OnePerCoin, EntryDesign::OneForAll, EntryDesign::Hybrid}) {
        if (to_string(d) == text) return d;
    }
    return std::nullopt;
}

std::optional<DisplayState> display_state_from_string(std::string_view text) {
    for (DisplayState s : {DisplayState::Hidden, DisplayState::Flagged,
                           DisplayState::ShownConditional, DisplayState::Shown}) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

FilterAction FilterPolicy::action_for(TransferClass cls) const {
    switch (cls) {
        case TransferClass::LegitNative:
        case TransferClass::LegitToken: return FilterAction::Show;
        case TransferClass::ZeroValue: return zero_value;
        case TransferClass::DustValue: return dust_value;
        case TransferClass::FakeToken: return fake_token;
        case TransferClass::FakeTokenZero: return fake_token_zero;
    }
    return FilterAction::Show;
}

FilterPolicy FilterPolicy::ideal() {
    FilterPolicy policy;
    policy.zero_value = FilterAction::Flag;
    policy.dust_value = FilterAction::Flag;
    policy.fake_token = FilterAction::Flag;
    policy.fake_token_zero = FilterAction::Flag;
    return policy;
}

FilterPolicy FilterPolicy::hide_all_phishing() {
    FilterPolicy policy;
    policy.zero_value = FilterAction::Hide;
    policy.dust_value = FilterAction::Hide;
    policy.fake_token = FilterAction::Hide;
    policy.fake_token_zero = FilterAction::Hide;
    return policy;
}

DisplayState apply_action(FilterAction action) {
    switch (action) {
        case FilterAction::Hide: return DisplayState::Hidden;
        case FilterAction::Flag: return DisplayState::Flagged;
        case FilterAction::Show: return DisplayState::Shown;
        case FilterAction::ShowConditional: return DisplayState::ShownConditional;
    }
    return DisplayState::Shown;
}

std::string entry_name_for(const TransferRecord& record, TransferClass cls,
                           const LegitTokenRegistry& registry) {
    if (is_native(record.asset)) return registry.native_symbol();
    std::string symbol = asset_symbol(record.asset, registry);
    if (symbol.empty()) symbol = "UNKNOWN";
    if (is_fake_class(cls)) symbol += "?";
    return symbol;
}

FeedSnapshot render_feed(const AccountHistory& history,
                         const std::vector<Verdict>& verdicts, EntryDesign design,
                         const FilterPolicy& policy, const LegitTokenRegistry& registry) {
    if (verdicts.size() != history.transfers.size()) {
        throw MismatchedVerdicts("history has " +
                                 std::to_string(history.transfers.size()) +
                                 " transfers but " + std::to_string(verdicts.size()) +
                                 " verdicts");
    }
    for (size_t i = 0; i < verdicts.size(); ++i) {
        if (key_of(verdicts[i].record) != key_of(history.transfers[i])) {
            throw MismatchedVerdicts("verdict " + std::to_string(i) +
                                     " does not match its transfer");
        }
    }

    FeedSnapshot snapshot;
    snapshot.owner = history.owner;
    snapshot.design = design;

    const bool per_coin = design != EntryDesign::OneForAll;
    const bool union_entry = design != EntryDesign::OnePerCoin;
    for (const Verdict& verdict : verdicts) {
        const DisplayState state = apply_action(policy.action_for(verdict.cls));
        const FeedItem item{verdict.record, state};
        if (per_coin) {
            snapshot.entries[entry_name_for(verdict.record, verdict.cls, registry)]
                .push_back(item);
        }
        if (union_entry) snapshot.entries["all"].push_back(item);
    }

    for (auto& [name, items] : snapshot.entries) {
        std::stable_sort(items.begin(), items.end(),
                         [](const FeedItem& a, const FeedItem& b) {
                             return record_order(b.record, a.record);  // newest first
                         });
    }
    return snapshot;
}

VisibleSet displayed_union(const FeedSnapshot& snapshot) {
    VisibleSet visible;
    for (const auto& [name, items] : snapshot.entries) {
        for (const FeedItem& item : items) {
            if (item.state == DisplayState::Hidden) continue;
            auto [it, inserted] = visible.emplace(key_of(item.record), item.state);
            if (!inserted && visibility_rank(item.state) > visibility_rank(it->second)) {
                it->second = item.state;
            }
        }
    }
    return visible;
}

}  // namespace poisonguard
