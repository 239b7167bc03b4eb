#include "poisonguard/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "poisonguard/errors.hpp"

namespace poisonguard {

using nlohmann::json;

namespace {

void apply_registry(LegitTokenRegistry& registry, const json& section,
                    const std::string& base) {
    if (!section.is_object()) throw SchemaError(base, "expected object");
    if (section.contains("native")) {
        if (!section["native"].is_string()) {
            throw SchemaError(base + "/native", "expected string");
        }
        registry.set_native_symbol(section["native"].get<std::string>());
    }
    if (!section.contains("tokens")) return;
    const json& tokens = section["tokens"];
    if (!tokens.is_array()) throw SchemaError(base + "/tokens", "expected array");
    for (size_t i = 0; i < tokens.size(); ++i) {
        const std::string location = base + "/tokens/" + std::to_string(i);
        const json& token = tokens[i];
        if (!token.is_object() || !token.contains("symbol") ||
            !token.contains("contract") || !token.contains("decimals")) {
            throw SchemaError(location, "expected {symbol, contract, decimals}");
        }
        if (!token["symbol"].is_string() || !token["contract"].is_string() ||
            !token["decimals"].is_number_unsigned()) {
            throw SchemaError(location, "bad field types");
        }
        if (token["decimals"].get<unsigned>() > kMaxDecimals) {
            throw SchemaError(location + "/decimals", "decimals exceed 77");
        }
        try {
            registry.add_token(token["symbol"].get<std::string>(),
                               parse_address(token["contract"].get<std::string>()).address,
                               token["decimals"].get<unsigned>());
        } catch (const MalformedHex& e) {
            throw SchemaError(location + "/contract", e.what());
        } catch (const Error& e) {
            throw SchemaError(location, e.what());
        }
    }
}

}  // namespace

BigUint dust_amount_for_symbol(const LegitTokenRegistry& registry,
                               const std::string& symbol, const std::string& amount) {
    const std::string key = normalize_symbol(symbol);
    unsigned decimals = 0;
    if (key == registry.native_symbol()) {
        decimals = kNativeDecimals;
    } else {
        const std::set<Address>& contracts = registry.lookup(key);
        if (!contracts.empty()) {
            if (const TokenMeta* meta = registry.metadata_for(*contracts.begin())) {
                decimals = meta->decimals;
            }
        }
        // Unregistered symbols: the registry knows no decimals, so the
        // amount is read as raw base units.
    }
    return normalize_amount(amount, decimals);
}

ToolConfig parse_tool_config(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw SchemaError("/", "config is not valid JSON");
    if (!doc.is_object()) throw SchemaError("/", "expected object");

    ToolConfig config;
    if (doc.contains("registry")) apply_registry(config.registry, doc["registry"], "/registry");
    if (doc.contains("registryFile")) {
        if (!doc["registryFile"].is_string()) {
            throw SchemaError("/registryFile", "expected path string");
        }
        std::ifstream in(doc["registryFile"].get<std::string>(), std::ios::binary);
        if (!in) {
            throw IoError("cannot open registry file: " +
                          doc["registryFile"].get<std::string>());
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        json registry_doc = json::parse(buffer.str(), nullptr, false);
        if (registry_doc.is_discarded()) {
            throw SchemaError("/registryFile", "registry file is not valid JSON");
        }
        apply_registry(config.registry, registry_doc, "/registryFile");
    }

    if (doc.contains("dustThresholds")) {
        const json& section = doc["dustThresholds"];
        if (!section.is_object()) throw SchemaError("/dustThresholds", "expected object");
        for (const auto& [symbol, amount] : section.items()) {
            if (!amount.is_string()) {
                throw SchemaError("/dustThresholds/" + symbol,
                                  "expected human-units amount string");
            }
            try {
                BigUint threshold = dust_amount_for_symbol(config.registry, symbol,
                                                           amount.get<std::string>());
                if (threshold.is_zero()) {
                    throw Error("dust threshold must be strictly positive");
                }
                config.detector.dust_thresholds[normalize_symbol(symbol)] =
                    std::move(threshold);
            } catch (const Error& e) {
                throw SchemaError("/dustThresholds/" + symbol, e.what());
            }
        }
    }

    if (doc.contains("lookalike")) {
        const json& section = doc["lookalike"];
        if (!section.is_object() || !section.contains("minPrefix") ||
            !section.contains("minSuffix") ||
            !section["minPrefix"].is_number_unsigned() ||
            !section["minSuffix"].is_number_unsigned()) {
            throw SchemaError("/lookalike", "expected {minPrefix, minSuffix}");
        }
        config.detector.lookalike = {section["minPrefix"].get<unsigned>(),
                                     section["minSuffix"].get<unsigned>()};
        config.guard.lookalike = config.detector.lookalike;
    }

    if (doc.contains("matchWindow")) {
        const std::string window = doc["matchWindow"].is_string()
                                       ? doc["matchWindow"].get<std::string>()
                                       : std::string{};
        if (window == "pastOnly") {
            config.detector.match_window = MatchWindow::PastOnly;
        } else if (window == "pastAndFuture") {
            config.detector.match_window = MatchWindow::PastAndFuture;
        } else {
            throw SchemaError("/matchWindow", "expected \"pastOnly\" or \"pastAndFuture\"");
        }
    }

    if (doc.contains("stalenessWindowBlocks")) {
        if (!doc["stalenessWindowBlocks"].is_number_unsigned()) {
            throw SchemaError("/stalenessWindowBlocks", "expected non-negative integer");
        }
        config.guard.staleness_window_blocks = doc["stalenessWindowBlocks"].get<uint64_t>();
    }

    if (doc.contains("shortPrefix")) config.short_prefix = doc["shortPrefix"].get<unsigned>();
    if (doc.contains("shortSuffix")) config.short_suffix = doc["shortSuffix"].get<unsigned>();
    if (doc.contains("endpoint")) config.endpoint = doc["endpoint"].get<std::string>();
    if (doc.contains("apiKey")) config.api_key = doc["apiKey"].get<std::string>();
    return config;
}

ToolConfig load_tool_config(const std::optional<std::filesystem::path>& path) {
    std::optional<std::filesystem::path> resolved = path;
    if (!resolved) {
        if (const char* env = std::getenv("POISONGUARD_CONFIG")) {
            resolved = std::filesystem::path(env);
        }
    }
    if (!resolved) return ToolConfig{};

    std::ifstream in(*resolved, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + resolved->string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_tool_config(buffer.str());
}

}  // namespace poisonguard
