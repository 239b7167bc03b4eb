#include "poisonguard/guard.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "httplib.h"
#include "poisonguard/errors.hpp"

namespace poisonguard {

std::string_view to_string(WarningLevel level) {
    switch (level) {
        case WarningLevel::Clear: return "clear";
        case WarningLevel::Reminder: return "reminder";
        case WarningLevel::ConfirmationRequired: return "confirmationRequired";
        case WarningLevel::Alert: return "alert";
    }
    return "unknown";
}

LoadedFlagList parse_flaglist(const std::string& text, const std::string& source) {
    LoadedFlagList loaded;
    loaded.list.source = source;
    std::istringstream stream(text);
    std::string line;
    for (size_t number = 1; std::getline(stream, line); ++number) {
        const size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const size_t end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        try {
            loaded.list.addresses.insert(parse_address(token).address);
        } catch (const MalformedHex& e) {
            loaded.line_errors.push_back("line " + std::to_string(number) + ": " +
                                         e.what());
        }
    }
    return loaded;
}

LoadedFlagList load_flaglist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open flag list: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_flaglist(buffer.str(), path.filename().string());
}

LoadedFlagList fetch_flaglist(const std::string& url) {
    const size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw IoError("flag list URL must include a scheme: " + url);
    }
    const size_t path_start = url.find('/', scheme + 3);
    const std::string host = url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(host);
    const httplib::Result res = client.Get(path);
    if (!res) {
        throw IoError("flag list fetch failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw IoError("flag list fetch returned HTTP " + std::to_string(res->status));
    }
    return parse_flaglist(res->body, url);
}

GuardResult check_recipient(const Address& recipient, const std::vector<FlagList>& flags,
                            const Address& owner, const std::vector<Verdict>& verdicts,
                            const std::set<Address>& contacts, const GuardConfig& cfg) {
    GuardResult result;
    const auto raise = [&result](WarningLevel level, std::string reason) {
        result.level = std::max(result.level, level);
        result.reasons.push_back(std::move(reason));
    };

    for (const FlagList& list : flags) {
        if (list.addresses.count(recipient)) {
            raise(WarningLevel::Alert,
                  "address is flagged" +
                      (list.source.empty() ? std::string{} : " by " + list.source));
        }
    }
    for (const Verdict& verdict : verdicts) {
        if (verdict.phishing && verdict.record.from == recipient) {
            raise(WarningLevel::Alert, "sender of detected phishing transfers");
            break;
        }
    }

    if (contacts.count(recipient)) {
        // Contact payments never warn above Clear unless flagged above.
        return result;
    }

    // Known-good counterparties and their most recent legitimate activity.
    std::map<Address, uint64_t> last_seen;
    uint64_t newest_block = 0;
    for (const Verdict& verdict : verdicts) {
        newest_block = std::max(newest_block, verdict.record.block);
        if (!is_legit_class(verdict.cls)) continue;
        const Address counterparty = counterparty_of(verdict.record, owner);
        uint64_t& seen = last_seen[counterparty];
        seen = std::max(seen, verdict.record.block);
    }

    const auto known = last_seen.find(recipient);
    if (known == last_seen.end()) {
        raise(WarningLevel::ConfirmationRequired,
              "unknown address: not in contacts, no prior transfers");
    } else {
        const uint64_t now = cfg.current_block.value_or(newest_block);
        const uint64_t age = now > known->second ? now - known->second : 0;
        if (age > cfg.staleness_window_blocks) {
            raise(WarningLevel::Reminder, "prior counterparty last seen " +
                                              std::to_string(age) + " blocks ago");
        }
    }

    // Look-alikes of anyone the user legitimately pays are exactly what the
    // poisoning attack forges; always surface the resemblance.
    std::set<Address> trusted = contacts;
    for (const auto& [address, block] : last_seen) trusted.insert(address);
    for (const Address& candidate : trusted) {
        const SimilarityScore score = similarity(recipient, candidate);
        if (is_lookalike(score, cfg.lookalike)) {
            raise(WarningLevel::ConfirmationRequired,
                  "look-alike of known address " + checksum_encode(candidate) +
                      " (prefix " + std::to_string(score.prefix_match) + ", suffix " +
                      std::to_string(score.suffix_match) + ")");
        }
    }

    return result;
}

}  // namespace poisonguard
