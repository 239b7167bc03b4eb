#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poisonguard/detector.hpp"
#include "poisonguard/transfer.hpp"

namespace poisonguard {

enum class EntryDesign { OnePerCoin, OneForAll, Hybrid };

enum class DisplayState { Hidden, Flagged, ShownConditional, Shown };

// Shown > ShownConditional > Flagged > Hidden. A conditionally shown fake is
// less exposed than a plainly shown one; a flagged one less still.
inline int visibility_rank(DisplayState state) { return static_cast<int>(state); }

std::string_view to_string(EntryDesign design);
std::string_view to_string(DisplayState state);
std::optional<EntryDesign> entry_design_from_string(std::string_view text);
std::optional<DisplayState> display_state_from_string(std::string_view text);

enum class FilterAction { Hide, Flag, Show, ShowConditional };

// What the feed does with each suspicious class. Legitimate classes always
// show; that is the point of a wallet.
struct FilterPolicy {
    FilterAction zero_value = FilterAction::Show;
    FilterAction dust_value = FilterAction::Show;
    FilterAction fake_token = FilterAction::Show;
    FilterAction fake_token_zero = FilterAction::Show;

    FilterAction action_for(TransferClass cls) const;

    static FilterPolicy show_everything() { return {}; }
    // Flag every phishing class: the display half of the ideal feed.
    static FilterPolicy ideal();
    static FilterPolicy hide_all_phishing();
};

DisplayState apply_action(FilterAction action);

struct FeedItem {
    TransferRecord record;
    DisplayState state = DisplayState::Shown;
};

struct FeedSnapshot {
    Address owner;
    EntryDesign design = EntryDesign::OneForAll;
    // Entry name -> records newest-first.
    std::map<std::string, std::vector<FeedItem>> entries;
    unsigned short_prefix = 4;
    unsigned short_suffix = 4;
};

// Builds the feed for a history under a design and policy. OnePerCoin groups
// by display symbol with fakes quarantined under "SYMBOL?"; OneForAll puts
// everything under "all"; Hybrid emits both. Throws MismatchedVerdicts when
// the verdicts do not line up with the history.
FeedSnapshot render_feed(const AccountHistory& history,
                         const std::vector<Verdict>& verdicts, EntryDesign design,
                         const FilterPolicy& policy, const LegitTokenRegistry& registry);

// Entry name a record files under in the per-coin design.
std::string entry_name_for(const TransferRecord& record, TransferClass cls,
                           const LegitTokenRegistry& registry);

using VisibleSet = std::map<TransferKey, DisplayState>;

// Union across entries with the most-visible state winning. Transfers whose
// best state is Hidden are not in the result: they are not displayed at all.
VisibleSet displayed_union(const FeedSnapshot& snapshot);

}  // namespace poisonguard
