#include "poisonguard/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "poisonguard/errors.hpp"
#include "poisonguard/hex.hpp"

namespace poisonguard {

using nlohmann::json;

std::string_view to_string(DiagnosisKind kind) {
    switch (kind) {
        case DiagnosisKind::Ok: return "ok";
        case DiagnosisKind::NotFound: return "notFound";
        case DiagnosisKind::Forbidden: return "forbidden";
        case DiagnosisKind::EmptyBody: return "emptyBody";
        case DiagnosisKind::RejectedRequest: return "rejectedRequest";
        case DiagnosisKind::Timeout: return "timeout";
        case DiagnosisKind::MalformedPayload: return "malformedPayload";
    }
    return "unknown";
}

namespace {

bool is_blank(const std::string& body) {
    return std::all_of(body.begin(), body.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

ProviderDiagnosis classify_response(int status, const std::string& body) {
    if (status == 404) return {DiagnosisKind::NotFound, status, "not found"};
    if (status == 403) return {DiagnosisKind::Forbidden, status, "forbidden"};
    if (status != 200) {
        return {DiagnosisKind::RejectedRequest, status,
                "HTTP " + std::to_string(status)};
    }
    if (is_blank(body)) return {DiagnosisKind::EmptyBody, status, "empty body"};

    json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        return {DiagnosisKind::MalformedPayload, status, "response is not JSON"};
    }
    if (doc.is_object() && doc.empty()) {
        return {DiagnosisKind::EmptyBody, status, "empty object"};
    }
    if (!doc.is_object() || !doc.contains("result")) {
        return {DiagnosisKind::MalformedPayload, status, "missing result envelope"};
    }
    const json& result = doc["result"];
    if (result.is_string()) {
        // Etherscan reports request errors as status "0" with a message in
        // place of the result array, e.g. "Invalid API Key".
        return {DiagnosisKind::RejectedRequest, status, result.get<std::string>()};
    }
    if (!result.is_array()) {
        return {DiagnosisKind::MalformedPayload, status, "result is not an array"};
    }
    return {DiagnosisKind::Ok, status, ""};
}

const Hash256 kTransferTopic =
    keccak256(std::string_view("Transfer(address,address,uint256)"));

TransferRecord decode_transfer_log(const RawLog& log, const LegitTokenRegistry& registry) {
    if (log.topics.empty() || log.topics[0] != kTransferTopic) {
        throw NotTransferEvent("topic0 is not the Transfer signature");
    }
    if (log.topics.size() != 3) {
        throw MalformedLog("Transfer log needs 3 topics, got " +
                           std::to_string(log.topics.size()));
    }
    if (log.data.size() != 32) {
        throw MalformedLog("Transfer data must be one 32-byte word, got " +
                           std::to_string(log.data.size()) + " bytes");
    }

    const auto address_from_topic = [](const Hash256& topic) {
        Address addr;
        std::copy(topic.begin() + 12, topic.end(), addr.bytes.begin());
        return addr;
    };

    TransferRecord record;
    record.tx_hash = log.tx_hash;
    record.block = log.block;
    record.log_index = log.log_index;
    record.from = address_from_topic(log.topics[1]);
    record.to = address_from_topic(log.topics[2]);
    record.amount = BigUint::from_bytes_be(log.data);

    TokenAsset asset;
    asset.contract = log.contract;
    if (const TokenMeta* meta = registry.metadata_for(log.contract)) {
        asset.symbol_claim = meta->symbol;
        asset.decimals = meta->decimals;
    } else {
        asset.symbol_claim = "UNKNOWN";
        asset.decimals = kNativeDecimals;
    }
    record.asset = asset;
    return record;
}

// --- Fixture files ---------------------------------------------------------

namespace {

std::string fixture_location(size_t index, const char* field) {
    return "/transfers/" + std::to_string(index) + "/" + field;
}

Address parse_fixture_address(const json& value, const std::string& location,
                              std::vector<std::string>& warnings) {
    if (!value.is_string()) throw SchemaError(location, "expected address string");
    try {
        const ParsedAddress parsed = parse_address(value.get<std::string>());
        if (!parsed.checksum_ok) {
            warnings.push_back(location + ": mixed-case address fails checksum, " +
                               "using byte value " + checksum_encode(parsed.address));
        }
        return parsed.address;
    } catch (const MalformedHex& e) {
        throw SchemaError(location, e.what());
    }
}

uint64_t parse_block(const json& value, const std::string& location) {
    if (value.is_number_unsigned()) return value.get<uint64_t>();
    throw SchemaError(location, "expected non-negative integer");
}

TransferRecord parse_fixture_record(const json& entry, size_t index,
                                    std::vector<std::string>& warnings) {
    if (!entry.is_object()) {
        throw SchemaError("/transfers/" + std::to_string(index), "expected object");
    }
    const auto require = [&](const char* field) -> const json& {
        if (!entry.contains(field)) {
            throw SchemaError(fixture_location(index, field), "missing field");
        }
        return entry[field];
    };

    TransferRecord record;
    const json& kind = require("kind");
    if (!kind.is_string() ||
        (kind.get<std::string>() != "native" && kind.get<std::string>() != "token")) {
        throw SchemaError(fixture_location(index, "kind"), "expected \"native\" or \"token\"");
    }
    const bool token = kind.get<std::string>() == "token";

    const json& hash = require("hash");
    if (!hash.is_string()) {
        throw SchemaError(fixture_location(index, "hash"), "expected hash string");
    }
    try {
        record.tx_hash = parse_hash256(hash.get<std::string>());
    } catch (const MalformedHex& e) {
        throw SchemaError(fixture_location(index, "hash"), e.what());
    }

    record.block = parse_block(require("block"), fixture_location(index, "block"));
    record.from = parse_fixture_address(require("from"), fixture_location(index, "from"),
                                        warnings);
    record.to =
        parse_fixture_address(require("to"), fixture_location(index, "to"), warnings);

    const json& amount = require("amount");
    if (!amount.is_string()) {
        throw SchemaError(fixture_location(index, "amount"),
                          "expected decimal string of base units");
    }
    try {
        record.amount = BigUint::from_decimal(amount.get<std::string>());
    } catch (const MalformedNumber& e) {
        throw SchemaError(fixture_location(index, "amount"), e.what());
    }

    if (token) {
        const json& log_index = require("logIndex");
        if (!log_index.is_number_unsigned()) {
            throw SchemaError(fixture_location(index, "logIndex"),
                              "expected non-negative integer");
        }
        record.log_index = log_index.get<uint32_t>();

        TokenAsset asset;
        asset.contract = parse_fixture_address(
            require("contract"), fixture_location(index, "contract"), warnings);
        const json& symbol = require("symbol");
        if (!symbol.is_string()) {
            throw SchemaError(fixture_location(index, "symbol"), "expected string");
        }
        asset.symbol_claim = symbol.get<std::string>();
        if (entry.contains("decimals")) {
            const json& decimals = entry["decimals"];
            if (!decimals.is_number_unsigned() ||
                decimals.get<unsigned>() > kMaxDecimals) {
                throw SchemaError(fixture_location(index, "decimals"),
                                  "expected integer in [0, 77]");
            }
            asset.decimals = decimals.get<unsigned>();
        }
        record.asset = asset;
    } else {
        if (entry.contains("logIndex")) {
            throw SchemaError(fixture_location(index, "logIndex"),
                              "native transfers carry no log index");
        }
        record.asset = NativeAsset{};
    }
    return record;
}

}  // namespace

LoadedHistory parse_fixture_json(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw SchemaError("/", "not valid JSON");
    if (!doc.is_object()) throw SchemaError("/", "expected object");
    if (!doc.contains("address")) throw SchemaError("/address", "missing field");
    if (!doc.contains("transfers") || !doc["transfers"].is_array()) {
        throw SchemaError("/transfers", "expected array");
    }

    LoadedHistory loaded;
    loaded.history.owner =
        parse_fixture_address(doc["address"], "/address", loaded.warnings);

    std::set<TransferKey> seen;
    const json& transfers = doc["transfers"];
    for (size_t i = 0; i < transfers.size(); ++i) {
        TransferRecord record = parse_fixture_record(transfers[i], i, loaded.warnings);
        if (record.from != loaded.history.owner && record.to != loaded.history.owner) {
            throw SchemaError("/transfers/" + std::to_string(i),
                              "transfer does not involve the fixture owner");
        }
        if (!seen.insert(key_of(record)).second) {
            throw DuplicateRecord("duplicate (hash, logIndex) at /transfers/" +
                                  std::to_string(i));
        }
        loaded.history.transfers.push_back(std::move(record));
    }
    sort_history(loaded.history);
    return loaded;
}

LoadedHistory load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open fixture: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_fixture_json(buffer.str());
}

std::string fixture_to_json(const AccountHistory& history) {
    json transfers = json::array();
    for (const TransferRecord& record : history.transfers) {
        json entry;
        entry["kind"] = is_native(record.asset) ? "native" : "token";
        entry["hash"] = to_hex(record.tx_hash);
        entry["block"] = record.block;
        if (record.log_index) entry["logIndex"] = *record.log_index;
        entry["from"] = checksum_encode(record.from);
        entry["to"] = checksum_encode(record.to);
        entry["amount"] = record.amount.to_decimal();
        if (const TokenAsset* token = as_token(record.asset)) {
            entry["contract"] = checksum_encode(token->contract);
            entry["symbol"] = token->symbol_claim;
            entry["decimals"] = token->decimals;
        }
        transfers.push_back(std::move(entry));
    }
    json doc;
    doc["address"] = checksum_encode(history.owner);
    doc["transfers"] = std::move(transfers);
    return doc.dump(2) + "\n";
}

void save_fixture(const AccountHistory& history, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write fixture: " + path.string());
    out << fixture_to_json(history);
    if (!out) throw IoError("failed writing fixture: " + path.string());
}

// --- Provider client ------------------------------------------------------

std::string probe_report_to_json(const ProbeReport& report) {
    json doc;
    doc["endpoint"] = report.endpoint;
    doc["httpStatus"] = report.http_status;
    doc["diagnosis"] = report.diagnosis;
    doc["bodyBytes"] = report.body_bytes;
    return doc.dump(2) + "\n";
}

namespace {

struct SplitUrl {
    std::string host_port;  // scheme://host:port
    std::string base_path;  // path prefix, possibly empty
};

SplitUrl split_url(const std::string& endpoint) {
    const size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
        throw Error("endpoint URL must include a scheme: " + endpoint);
    }
    const size_t path = endpoint.find('/', scheme + 3);
    if (path == std::string::npos) return {endpoint, ""};
    std::string base = endpoint.substr(path);
    if (base == "/") base.clear();
    return {endpoint.substr(0, path), base};
}

struct PageResult {
    ProviderDiagnosis diagnosis;
    int http_status = 0;
    size_t body_bytes = 0;
    json rows;  // array when diagnosis.ok()
};

PageResult get_page(httplib::Client& client, const SplitUrl& url,
                    const std::string& action, const Address& owner, unsigned page,
                    const FetchOptions& options) {
    std::string path = url.base_path + "/?module=account&action=" + action +
                       "&address=" + checksum_encode(owner) +
                       "&page=" + std::to_string(page) +
                       "&offset=" + std::to_string(options.page_size) + "&sort=asc";
    if (options.api_key) path += "&apikey=" + *options.api_key;

    std::function<void(std::chrono::milliseconds)> sleep_for = options.sleeper;
    if (!sleep_for) {
        sleep_for = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }

    httplib::Result res{nullptr, httplib::Error::Unknown};
    for (unsigned attempt = 0;; ++attempt) {
        res = client.Get(path);
        if (res) break;
        // Transport-level failure: no status line at all. Retried with
        // exponential backoff; HTTP errors are deterministic and are not.
        if (attempt >= options.max_retries) {
            PageResult out;
            out.diagnosis = {DiagnosisKind::Timeout, 0,
                             "no response: " + httplib::to_string(res.error())};
            return out;
        }
        sleep_for(std::chrono::milliseconds(100u << attempt));
    }

    PageResult out;
    out.http_status = res->status;
    out.body_bytes = res->body.size();
    out.diagnosis = classify_response(res->status, res->body);
    if (out.diagnosis.ok()) {
        out.rows = json::parse(res->body)["result"];
    }
    return out;
}

// Empty-body pages after the first page terminate pagination cleanly: some
// providers answer page overruns that way instead of returning [].
bool parse_rows(const json& rows, bool token_rows, const Address& owner,
                std::vector<TransferRecord>& records, std::string& error) {
    for (const json& row : rows) {
        if (!row.is_object()) {
            error = "result row is not an object";
            return false;
        }
        const auto field = [&](const char* name) -> std::optional<std::string> {
            if (!row.contains(name) || !row[name].is_string()) return std::nullopt;
            return row[name].get<std::string>();
        };
        const auto hash = field("hash");
        const auto block = field("blockNumber");
        const auto from = field("from");
        const auto to = field("to");
        const auto value = field("value");
        if (!hash || !block || !from || !to || !value) {
            error = "result row is missing a required field";
            return false;
        }
        try {
            TransferRecord record;
            record.tx_hash = parse_hash256(*hash);
            record.block = std::stoull(*block);
            record.from = parse_address(*from).address;
            record.to = parse_address(*to).address;
            record.amount = BigUint::from_decimal(*value);
            if (token_rows) {
                const auto contract = field("contractAddress");
                const auto symbol = field("tokenSymbol");
                const auto decimals = field("tokenDecimal");
                const auto log_index = field("logIndex");
                if (!contract || !symbol || !decimals || !log_index) {
                    error = "token row is missing a required field";
                    return false;
                }
                TokenAsset asset;
                asset.contract = parse_address(*contract).address;
                asset.symbol_claim = *symbol;
                const unsigned long parsed_decimals = std::stoul(*decimals);
                if (parsed_decimals > kMaxDecimals) {
                    error = "token row has out-of-range decimals";
                    return false;
                }
                asset.decimals = static_cast<unsigned>(parsed_decimals);
                record.asset = asset;
                record.log_index = static_cast<uint32_t>(std::stoul(*log_index));
            }
            if (record.from != owner && record.to != owner) {
                error = "provider returned a transfer not involving the account";
                return false;
            }
            records.push_back(std::move(record));
        } catch (const std::exception& e) {
            error = std::string("unparseable result row: ") + e.what();
            return false;
        }
    }
    return true;
}

}  // namespace

FetchResult fetch_history(const std::string& endpoint, const Address& owner,
                          const FetchOptions& options) {
    const SplitUrl url = split_url(endpoint);
    httplib::Client client(url.host_port);
    client.set_connection_timeout(std::chrono::milliseconds(options.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(options.timeout_ms));

    FetchResult result;
    result.history.owner = owner;
    result.probe.endpoint = endpoint;

    const auto fail = [&](const ProviderDiagnosis& diagnosis, int status,
                          size_t body_bytes) {
        result.history.transfers.clear();  // all-or-nothing per probe
        result.truncated = false;
        result.diagnosis = diagnosis;
        result.probe.http_status = status;
        result.probe.diagnosis = std::string(to_string(diagnosis.kind));
        result.probe.body_bytes = body_bytes;
        return result;
    };

    for (const char* action : {"txlist", "tokentx"}) {
        const bool token_rows = std::string_view(action) == "tokentx";
        unsigned fetched = 0;
        for (unsigned page = 1;; ++page) {
            const PageResult page_result =
                get_page(client, url, action, owner, page, options);
            if (!page_result.diagnosis.ok()) {
                // A blank page past the first has a benign reading: the
                // provider paged out. Everything else fails the probe.
                if (page > 1 && page_result.diagnosis.kind == DiagnosisKind::EmptyBody) {
                    break;
                }
                return fail(page_result.diagnosis, page_result.http_status,
                            page_result.body_bytes);
            }
            result.probe.http_status = page_result.http_status;
            result.probe.body_bytes = page_result.body_bytes;

            std::string error;
            if (!parse_rows(page_result.rows, token_rows, owner,
                            result.history.transfers, error)) {
                return fail({DiagnosisKind::MalformedPayload, page_result.http_status,
                             error},
                            page_result.http_status, page_result.body_bytes);
            }
            fetched += static_cast<unsigned>(page_result.rows.size());
            if (page_result.rows.size() < options.page_size) break;
            if (fetched >= options.max_records) {
                result.truncated = true;
                break;
            }
        }
    }

    std::set<TransferKey> seen;
    for (const TransferRecord& record : result.history.transfers) {
        if (!seen.insert(key_of(record)).second) {
            return fail({DiagnosisKind::MalformedPayload, result.probe.http_status,
                         "provider returned duplicate records"},
                        result.probe.http_status, result.probe.body_bytes);
        }
    }

    sort_history(result.history);
    result.diagnosis = {DiagnosisKind::Ok, result.probe.http_status, ""};
    result.probe.diagnosis = std::string(to_string(DiagnosisKind::Ok));
    return result;
}

}  // namespace poisonguard
