#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poisonguard/address.hpp"
#include "poisonguard/detector.hpp"

namespace poisonguard {

// Ordered by severity; the guard reports the worst applicable level.
enum class WarningLevel { Clear = 0, Reminder = 1, ConfirmationRequired = 2, Alert = 3 };

std::string_view to_string(WarningLevel level);

struct FlagList {
    std::set<Address> addresses;
    std::string source;
};

struct LoadedFlagList {
    FlagList list;
    std::vector<std::string> line_errors;  // "line 7: ..." per malformed line
};

// One address per line, '#' starts a comment, duplicates collapse. Malformed
// lines are collected, not fatal. Throws IoError when the file is unreadable.
LoadedFlagList load_flaglist(const std::filesystem::path& path);
LoadedFlagList parse_flaglist(const std::string& text, const std::string& source);

// Same format served over HTTP; alerting services are just flag lists with a
// URL. Throws IoError on any transport or status failure.
LoadedFlagList fetch_flaglist(const std::string& url);

struct GuardConfig {
    LookalikeThresholds lookalike;
    // A prior counterparty not seen within this many blocks earns a
    // reminder. ~90 days at mainnet cadence.
    uint64_t staleness_window_blocks = 648'000;
    // Defaults to the newest block in the analyzed history.
    std::optional<uint64_t> current_block;
};

struct GuardResult {
    WarningLevel level = WarningLevel::Clear;
    std::vector<std::string> reasons;  // every triggered rule, worst first
};

// Pre-send verification of a recipient:
//   Alert                 flag-listed, or the sender of a detected phishing
//                         transfer
//   ConfirmationRequired  unknown address, or a look-alike of a contact /
//                         known-good counterparty
//   Reminder              known counterparty gone stale
//   Clear                 contacts and recently seen counterparties
// Contacts never warn above Clear unless flagged.
GuardResult check_recipient(const Address& recipient, const std::vector<FlagList>& flags,
                            const Address& owner, const std::vector<Verdict>& verdicts,
                            const std::set<Address>& contacts,
                            const GuardConfig& cfg = {});

}  // namespace poisonguard
