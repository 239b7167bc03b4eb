#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poisonguard/transfer.hpp"

namespace poisonguard {

enum class DiagnosisKind {
    Ok,
    NotFound,         // HTTP 404
    Forbidden,        // HTTP 403
    EmptyBody,        // HTTP 200 with nothing in it
    RejectedRequest,  // HTTP 200 carrying an error message instead of data
    Timeout,          // no response at the transport level
    MalformedPayload,
};

std::string_view to_string(DiagnosisKind kind);

struct ProviderDiagnosis {
    DiagnosisKind kind = DiagnosisKind::Ok;
    int http_status = 0;  // 0 when no response arrived
    std::string detail;

    bool ok() const { return kind == DiagnosisKind::Ok; }
};

// Classifies one HTTP response. Pure; the network client and the tests share
// this exact mapping.
ProviderDiagnosis classify_response(int status, const std::string& body);

// Raw EVM event log, the wire-level shape token transfers arrive in.
struct RawLog {
    Address contract;
    std::vector<Hash256> topics;
    std::vector<uint8_t> data;
    Hash256 tx_hash{};
    uint64_t block = 0;
    uint32_t log_index = 0;
};

// keccak256("Transfer(address,address,uint256)")
extern const Hash256 kTransferTopic;

// Decodes an ERC-20 Transfer log. Sender/recipient come from the indexed
// topics, the amount from the data word. The claimed symbol and decimals are
// resolved from the registry's metadata cache; unknown contracts decode as
// "UNKNOWN" with 18 decimals, which is enough for zero/nonzero judgments but
// not for dust thresholds. Throws NotTransferEvent / MalformedLog.
TransferRecord decode_transfer_log(const RawLog& log, const LegitTokenRegistry& registry);

// --- Fixture files -------------------------------------------------------

struct LoadedHistory {
    AccountHistory history;
    std::vector<std::string> warnings;  // e.g. checksum-violating casing
};

// Reads a history fixture (JSON), validating the schema, the owner
// involvement of every record, and (hash, log index) uniqueness. Throws
// SchemaError, DuplicateRecord, IoError.
LoadedHistory load_fixture(const std::filesystem::path& path);
LoadedHistory parse_fixture_json(const std::string& text);

std::string fixture_to_json(const AccountHistory& history);
void save_fixture(const AccountHistory& history, const std::filesystem::path& path);

// --- Provider client ------------------------------------------------------

struct ProbeReport {
    std::string endpoint;
    int http_status = 0;
    std::string diagnosis;
    size_t body_bytes = 0;
};

std::string probe_report_to_json(const ProbeReport& report);

struct FetchOptions {
    std::optional<std::string> api_key;
    unsigned page_size = 1000;
    unsigned max_records = 10000;  // per asset class; past this we truncate
    unsigned timeout_ms = 10000;
    unsigned max_retries = 2;  // timeouts only; 4xx are deterministic
    // Injected so backoff is testable without waiting.
    std::function<void(std::chrono::milliseconds)> sleeper;
};

struct FetchResult {
    AccountHistory history;
    ProviderDiagnosis diagnosis;
    bool truncated = false;
    ProbeReport probe;
};

// Pulls native (`txlist`) and token (`tokentx`) histories from an
// Etherscan-compatible endpoint and merges them. Remote faults never throw:
// any failure yields an empty history plus the diagnosis, all-or-nothing.
// Only locally malformed URLs raise.
FetchResult fetch_history(const std::string& endpoint, const Address& owner,
                          const FetchOptions& options = {});

}  // namespace poisonguard
