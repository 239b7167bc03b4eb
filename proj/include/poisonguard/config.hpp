#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "poisonguard/detector.hpp"
#include "poisonguard/guard.hpp"
#include "poisonguard/transfer.hpp"

namespace poisonguard {

// Resolved tool configuration: built-in defaults, overridden by the config
// file, overridden again by command-line flags (the CLI applies those).
struct ToolConfig {
    LegitTokenRegistry registry = registry_default();
    DetectorConfig detector = DetectorConfig::defaults();
    GuardConfig guard;
    unsigned short_prefix = 4;
    unsigned short_suffix = 4;
    std::optional<std::string> endpoint;
    std::optional<std::string> api_key;
};

// Loads the file if given, else $POISONGUARD_CONFIG if set, else defaults.
// Throws IoError / SchemaError.
ToolConfig load_tool_config(const std::optional<std::filesystem::path>& path);

ToolConfig parse_tool_config(const std::string& text);

// Converts a human-units amount for `symbol` into base units using the
// registry's decimals (native symbol -> 18). Unregistered symbols take
// integer base units only.
BigUint dust_amount_for_symbol(const LegitTokenRegistry& registry,
                               const std::string& symbol, const std::string& amount);

}  // namespace poisonguard
