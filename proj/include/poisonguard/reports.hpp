#pragma once

#include <string>
#include <vector>

#include "poisonguard/detector.hpp"
#include "poisonguard/feed.hpp"

namespace poisonguard {

// Verdict report: array of
//   {"hash","logIndex"?,"class","phishing",
//    "matchedCounterparty"?,"prefixMatch"?,"suffixMatch"?}
std::string verdicts_to_json(const std::vector<Verdict>& verdicts);

// Feed snapshot:
//   {"design":s,"entries":{name:[{"hash","logIndex"?,"state","fromShort",
//    "toShort","amount","symbol"}]}}
// Also the input format for scoring feeds transcribed from real wallets, so
// the parser only insists on hash/state per item.
std::string snapshot_to_json(const FeedSnapshot& snapshot,
                             const LegitTokenRegistry& registry);

// A transcribed snapshot has display states but not necessarily full
// records; scoring joins it to ground truth by (hash, logIndex).
struct TranscribedSnapshot {
    EntryDesign design = EntryDesign::OneForAll;
    std::map<std::string, std::vector<std::pair<TransferKey, DisplayState>>> entries;
};

TranscribedSnapshot parse_snapshot_json(const std::string& text);

VisibleSet displayed_union(const TranscribedSnapshot& snapshot);

}  // namespace poisonguard
