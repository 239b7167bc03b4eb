#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poisonguard/detector.hpp"
#include "poisonguard/feed.hpp"
#include "poisonguard/ingest.hpp"

namespace poisonguard {

struct EvidenceItem {
    TransferKey key;
    DisplayState state = DisplayState::Shown;
    std::string rule;  // which scoring clause this record triggered
};

// Usability 0-2 and risk 0-4 for one displayed feed against ground truth.
// A feed that shows nothing legitimate is unusable and, by convention,
// scored at risk 0.
struct ScoreCard {
    int usability = 0;
    int risk = 0;
    std::vector<EvidenceItem> evidence;
    std::optional<std::string> diagnosis;
};

// Usability: 2 when both a legitimate native and a legitimate token transfer
// are visible, 1 when exactly one of the two classes is, 0 otherwise.
int score_usability(const VisibleSet& visible, const std::vector<Verdict>& ground_truth);

// Risk ladder, most severe clause first:
//   4  every phishing bucket (zero/dust/fake, per asset) has a Shown member
//   3  any fake transfer is Shown
//   2  any zero-value transfer is Shown, or any fake is conditionally
//      shown / flagged
//   1  any dust-value transfer is Shown
//   0  otherwise
int score_risk(const VisibleSet& visible, const std::vector<Verdict>& ground_truth);

// Combined card with evidence; enforces usability 0 => risk 0.
ScoreCard make_scorecard(const VisibleSet& visible,
                         const std::vector<Verdict>& ground_truth);

enum class FilterOrigin { Provider, Wallet, NotFiltered, Indeterminate };

std::string_view to_string(FilterOrigin origin);

// Who dropped each ground-truth transfer: the provider (absent from its
// response), the wallet (returned but not displayed), or nobody. Without a
// provider view everything is Indeterminate. Transfers in the provider view
// that are not part of the ground truth are ignored (with a warning).
struct AttributionResult {
    std::map<TransferKey, FilterOrigin> origins;
    std::vector<std::string> warnings;
};

AttributionResult attribute_filtering(const std::vector<Verdict>& ground_truth,
                                      const std::optional<std::set<TransferKey>>& provider_view,
                                      const VisibleSet& displayed);

// Human-readable cause for a zero-usability feed, from the provider probe.
std::string diagnose_zero_usability(const ProviderDiagnosis& probe);

// ScoreCard JSON: {"usability":N,"risk":N,"evidence":[...],
//                  "attribution":{hash:origin},"diagnosis":s?}
std::string scorecard_to_json(const ScoreCard& card,
                              const std::optional<AttributionResult>& attribution);

}  // namespace poisonguard
