#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "poisonguard/address.hpp"
#include "poisonguard/bigint.hpp"
#include "poisonguard/keccak.hpp"

namespace poisonguard {

inline constexpr unsigned kNativeDecimals = 18;
inline constexpr unsigned kMaxDecimals = 77;  // 256-bit amounts in decimal

struct NativeAsset {
    friend bool operator==(const NativeAsset&, const NativeAsset&) = default;
};

struct TokenAsset {
    Address contract;
    std::string symbol_claim;  // what the token says it is, not what it is
    unsigned decimals = kNativeDecimals;

    friend bool operator==(const TokenAsset&, const TokenAsset&) = default;
};

using AssetKind = std::variant<NativeAsset, TokenAsset>;

inline bool is_native(const AssetKind& asset) {
    return std::holds_alternative<NativeAsset>(asset);
}
inline const TokenAsset* as_token(const AssetKind& asset) {
    return std::get_if<TokenAsset>(&asset);
}
unsigned asset_decimals(const AssetKind& asset);

// One native-coin or token transfer as it lands in an account history.
struct TransferRecord {
    Hash256 tx_hash{};
    uint64_t block = 0;
    std::optional<uint32_t> log_index;  // absent for native transfers
    Address from;
    Address to;
    AssetKind asset = NativeAsset{};
    BigUint amount;  // base units, exact

    friend bool operator==(const TransferRecord&, const TransferRecord&) = default;
};

// (tx hash, log index) identity of a record; unique within a history.
struct TransferKey {
    Hash256 tx_hash{};
    std::optional<uint32_t> log_index;

    friend auto operator<=>(const TransferKey&, const TransferKey&) = default;
};

inline TransferKey key_of(const TransferRecord& record) {
    return {record.tx_hash, record.log_index};
}

struct TokenMeta {
    std::string symbol;
    unsigned decimals = kNativeDecimals;
};

// Known-good token contracts keyed by symbol, plus a metadata cache of
// claimed symbols per contract. A contract claiming a registered symbol
// without being in that symbol's set is impersonating it.
class LegitTokenRegistry {
public:
    // Registers a genuine contract for `symbol` (and caches its metadata).
    // Throws Error if the contract is already listed under another symbol or
    // the symbol collides with the native coin.
    void add_token(const std::string& symbol, const Address& contract, unsigned decimals);

    // Records what a contract claims to be without endorsing it. Decoders
    // use this for contracts observed in the wild (fake tokens included).
    void add_metadata(const Address& contract, const std::string& symbol,
                      unsigned decimals);

    const std::set<Address>& lookup(const std::string& symbol) const;
    bool is_registered_symbol(const std::string& symbol) const;
    const TokenMeta* metadata_for(const Address& contract) const;

    const std::string& native_symbol() const { return native_symbol_; }
    void set_native_symbol(const std::string& symbol);

    const std::map<std::string, std::set<Address>>& entries() const { return entries_; }

private:
    std::map<std::string, std::set<Address>> entries_;  // symbol -> contracts
    std::map<Address, TokenMeta> metadata_;
    std::string native_symbol_ = "ETH";
};

// Uppercases for registry lookups; fake tokens mimic casing variants.
std::string normalize_symbol(std::string_view symbol);

// Built-in registry: mainnet USDT, native ETH.
LegitTokenRegistry registry_default();

inline constexpr std::string_view kUsdtContractHex =
    "0xdAC17F958D2ee523a2206206994597C13D831ec7";
inline constexpr unsigned kUsdtDecimals = 6;

struct AccountHistory {
    Address owner;
    std::vector<TransferRecord> transfers;  // sorted by (block, log index)
};

// Total order over records: (block, log index, tx hash); native records sort
// before token records within a block.
bool record_order(const TransferRecord& a, const TransferRecord& b);
void sort_history(AccountHistory& history);

bool is_incoming(const TransferRecord& record, const Address& owner);
// The non-owner side of a transfer.
Address counterparty_of(const TransferRecord& record, const Address& owner);

// Human decimal string -> exact base units (raw * 10^decimals). Throws
// MalformedNumber for non-numerals, PrecisionLoss when the fraction part is
// longer than `decimals`.
BigUint normalize_amount(std::string_view raw, unsigned decimals);

// Inverse rendering: base units -> human decimal string, trailing fraction
// zeros stripped.
std::string render_amount(const BigUint& base_units, unsigned decimals);

}  // namespace poisonguard
