#include "poisonguard/transfer.hpp"

#include <algorithm>
#include <cctype>

#include "poisonguard/errors.hpp"

namespace poisonguard {

unsigned asset_decimals(const AssetKind& asset) {
    if (const TokenAsset* token = as_token(asset)) return token->decimals;
    return kNativeDecimals;
}

std::string normalize_symbol(std::string_view symbol) {
    std::string out(symbol);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

void LegitTokenRegistry::add_token(const std::string& symbol, const Address& contract,
                                   unsigned decimals) {
    const std::string key = normalize_symbol(symbol);
    if (key == native_symbol_) {
        throw Error("token symbol collides with native coin: " + key);
    }
    for (const auto& [other, contracts] : entries_) {
        if (other != key && contracts.count(contract)) {
            throw Error("contract already registered under symbol " + other);
        }
    }
    entries_[key].insert(contract);
    metadata_[contract] = TokenMeta{key, decimals};
}

void LegitTokenRegistry::add_metadata(const Address& contract, const std::string& symbol,
                                      unsigned decimals) {
    metadata_[contract] = TokenMeta{normalize_symbol(symbol), decimals};
}

const std::set<Address>& LegitTokenRegistry::lookup(const std::string& symbol) const {
    static const std::set<Address> kEmpty;
    const auto it = entries_.find(normalize_symbol(symbol));
    return it == entries_.end() ? kEmpty : it->second;
}

bool LegitTokenRegistry::is_registered_symbol(const std::string& symbol) const {
    return entries_.count(normalize_symbol(symbol)) > 0;
}

const TokenMeta* LegitTokenRegistry::metadata_for(const Address& contract) const {
    const auto it = metadata_.find(contract);
    return it == metadata_.end() ? nullptr : &it->second;
}

void LegitTokenRegistry::set_native_symbol(const std::string& symbol) {
    const std::string key = normalize_symbol(symbol);
    if (entries_.count(key)) {
        throw Error("native symbol collides with registered token: " + key);
    }
    native_symbol_ = key;
}

LegitTokenRegistry registry_default() {
    LegitTokenRegistry registry;
    registry.add_token("USDT", address_from_hex(kUsdtContractHex), kUsdtDecimals);
    return registry;
}

bool record_order(const TransferRecord& a, const TransferRecord& b) {
    if (a.block != b.block) return a.block < b.block;
    // Native transfers (no log index) precede event logs within a block.
    const int64_t la = a.log_index ? static_cast<int64_t>(*a.log_index) : -1;
    const int64_t lb = b.log_index ? static_cast<int64_t>(*b.log_index) : -1;
    if (la != lb) return la < lb;
    return a.tx_hash < b.tx_hash;
}

void sort_history(AccountHistory& history) {
    std::sort(history.transfers.begin(), history.transfers.end(), record_order);
}

bool is_incoming(const TransferRecord& record, const Address& owner) {
    return record.to == owner;
}

Address counterparty_of(const TransferRecord& record, const Address& owner) {
    return record.to == owner ? record.from : record.to;
}

BigUint normalize_amount(std::string_view raw, unsigned decimals) {
    const size_t dot = raw.find('.');
    const std::string_view whole = raw.substr(0, dot);
    std::string_view fraction;
    if (dot != std::string_view::npos) {
        fraction = raw.substr(dot + 1);
        if (fraction.empty() || whole.empty()) {
            throw MalformedNumber("incomplete decimal numeral: " + std::string(raw));
        }
        if (fraction.find('.') != std::string_view::npos) {
            throw MalformedNumber("multiple decimal points: " + std::string(raw));
        }
    }
    if (whole.empty()) throw MalformedNumber("empty numeral");
    if (fraction.size() > decimals) {
        throw PrecisionLoss("fraction of " + std::string(raw) + " exceeds " +
                            std::to_string(decimals) + " decimals");
    }

    BigUint units = BigUint::from_decimal(whole);
    units.mul_pow10(decimals);
    if (!fraction.empty()) {
        BigUint frac = BigUint::from_decimal(fraction);
        frac.mul_pow10(decimals - static_cast<unsigned>(fraction.size()));
        units += frac;
    }
    return units;
}

std::string render_amount(const BigUint& base_units, unsigned decimals) {
    std::string digits = base_units.to_decimal();
    if (decimals == 0) return digits;
    if (digits.size() <= decimals) {
        digits.insert(0, decimals - digits.size() + 1, '0');
    }
    std::string whole = digits.substr(0, digits.size() - decimals);
    std::string fraction = digits.substr(digits.size() - decimals);
    while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
    return fraction.empty() ? whole : whole + "." + fraction;
}

}  // namespace poisonguard
