// poisonguard: simulate address-poisoning activity at the data level, scan
// account histories for phishing transfers, score wallet feeds, and vet
// recipients before funds move.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "poisonguard/attack.hpp"
#include "poisonguard/config.hpp"
#include "poisonguard/errors.hpp"
#include "poisonguard/evaluator.hpp"
#include "poisonguard/feed.hpp"
#include "poisonguard/guard.hpp"
#include "poisonguard/hex.hpp"
#include "poisonguard/ingest.hpp"
#include "poisonguard/reports.hpp"

namespace {

using namespace poisonguard;
using nlohmann::json;

// Exit codes: 0-6 are semantic results, 64+ are usage/environment failures.
constexpr int kExitPhishingFound = 5;
constexpr int kExitSearchExhausted = 6;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;

struct GlobalArgs {
    std::optional<std::string> config_path;
    std::optional<uint64_t> seed;
    bool json_output = false;
};

std::string resolve_api_key(const std::string& raw) {
    if (raw.rfind("env:", 0) == 0) {
        const char* value = std::getenv(raw.substr(4).c_str());
        if (!value) throw Error("environment variable not set: " + raw.substr(4));
        return value;
    }
    return raw;
}

Address parse_cli_address(const std::string& text) {
    try {
        return parse_address(text).address;
    } catch (const MalformedHex& e) {
        throw Error(std::string("bad address: ") + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void apply_dust_overrides(ToolConfig& config, const std::optional<std::string>& dust_eth,
                          const std::vector<std::string>& dust_tokens) {
    const auto checked = [&](const std::string& symbol, const std::string& amount) {
        BigUint threshold = dust_amount_for_symbol(config.registry, symbol, amount);
        if (threshold.is_zero()) {
            throw Error("dust threshold for " + symbol + " must be strictly positive");
        }
        return threshold;
    };
    if (dust_eth) {
        config.detector.dust_thresholds[config.registry.native_symbol()] =
            checked(config.registry.native_symbol(), *dust_eth);
    }
    for (const std::string& entry : dust_tokens) {
        const size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw Error("--dust-token expects SYMBOL=AMOUNT, got: " + entry);
        }
        const std::string symbol = normalize_symbol(entry.substr(0, eq));
        config.detector.dust_thresholds[symbol] = checked(symbol, entry.substr(eq + 1));
    }
}

// --- simulate ----------------------------------------------------------------

int cmd_simulate(const GlobalArgs& global, const ToolConfig& config,
                 const std::string& out_path, std::optional<std::string> victim_text,
                 std::optional<std::string> benign_text,
                 std::optional<std::string> phishing_text, unsigned prefix,
                 unsigned suffix, uint64_t n, uint64_t base_block) {
    SearchOptions search;
    search.seed = global.seed;
    search.workers = std::max(1u, std::thread::hardware_concurrency());

    const Hash256 stream = global.seed ? expand_seed(*global.seed) : KeccakRng().key();

    Address victim;
    if (victim_text) {
        victim = parse_cli_address(*victim_text);
    } else {
        victim = keypair_for_index(keyed_block(stream, "victim", 0), 0).address;
    }

    Address benign, phishing;
    uint64_t candidates = 0;
    size_t pairs_found = 0;
    if (benign_text && phishing_text) {
        benign = parse_cli_address(*benign_text);
        phishing = parse_cli_address(*phishing_text);
    } else if (benign_text || phishing_text) {
        throw Error("--benign and --phishing must be given together");
    } else {
        // Grow the key pool until a pair shows up; the expected pair count
        // rises quadratically with the pool, so a few increments settle it.
        constexpr uint64_t kGrowth = 100'000;
        constexpr uint64_t kCap = 1'000'000;
        uint64_t pool = n;
        for (;;) {
            const PairSearchResult result = pair_search(pool, prefix, suffix, search);
            candidates = result.stats.candidates_tried;
            pairs_found = result.pairs.size();
            if (!result.pairs.empty()) {
                benign = result.pairs.front().first.address;
                phishing = result.pairs.front().second.address;
                break;
            }
            if (pool >= kCap) {
                throw SearchExhausted("no look-alike pair within " +
                                      std::to_string(pool) + " keys");
            }
            pool = std::min(kCap, pool + kGrowth);
            std::cerr << "no pair in " << candidates << " keys; growing pool to "
                      << pool << "\n";
        }
    }

    const Scenario scenario =
        build_scenario(victim, benign, phishing, config.registry, base_block,
                       /*block_stride=*/10, LookalikeThresholds{prefix, suffix});
    save_fixture(scenario.history, out_path);

    json sidecar;
    if (global.seed) {
        sidecar["seed"] = *global.seed;
    } else {
        sidecar["seed"] = nullptr;
    }
    sidecar["thresholds"] = {{"minPrefix", prefix}, {"minSuffix", suffix}};
    sidecar["keysGenerated"] = candidates;
    sidecar["pairsFound"] = pairs_found;
    sidecar["victim"] = checksum_encode(victim);
    sidecar["benign"] = checksum_encode(benign);
    sidecar["phishing"] = checksum_encode(phishing);
    sidecar["fakeUsdtContract"] = checksum_encode(scenario.fake_usdt_contract);
    sidecar["fakeEthContract"] = checksum_encode(scenario.fake_eth_contract);
    sidecar["baseBlock"] = base_block;
    write_text_file(out_path + ".provenance.json", sidecar.dump(2) + "\n");

    if (global.json_output) {
        std::cout << sidecar.dump(2) << "\n";
    } else {
        std::cout << "wrote " << out_path << " (10 transfers)\n"
                  << "victim   " << checksum_encode(victim) << "\n"
                  << "benign   " << checksum_encode(benign) << "\n"
                  << "phishing " << checksum_encode(phishing) << "\n";
    }
    return 0;
}

// --- scan ---------------------------------------------------------------------

int cmd_scan(const GlobalArgs& global, const ToolConfig& config,
             const std::optional<std::string>& fixture_path,
             const std::optional<std::string>& address_text,
             const std::optional<std::string>& out_path) {
    AccountHistory history;

    if (config.endpoint) {
        if (!address_text) throw Error("scanning an endpoint requires --address");
        FetchOptions options;
        options.api_key = config.api_key;
        const FetchResult result =
            fetch_history(*config.endpoint, parse_cli_address(*address_text), options);
        history = std::move(result.history);
        if (!result.diagnosis.ok()) {
            std::cerr << "warning: provider fault, empty history ("
                      << diagnose_zero_usability(result.diagnosis) << ")\n";
        }
    } else if (fixture_path) {
        const LoadedHistory loaded = load_fixture(*fixture_path);
        for (const std::string& warning : loaded.warnings) {
            std::cerr << "warning: " << warning << "\n";
        }
        history = std::move(loaded.history);
    } else {
        throw Error("scan needs a fixture path or --endpoint");
    }

    const auto verdicts = analyze_history(history, config.registry, config.detector);
    const std::string report = verdicts_to_json(verdicts);
    if (out_path) write_text_file(*out_path, report);

    size_t phishing = 0;
    for (const Verdict& verdict : verdicts) phishing += verdict.phishing;

    if (global.json_output || !out_path) {
        std::cout << report;
    }
    if (!global.json_output) {
        std::cerr << verdicts.size() << " transfers, " << phishing
                  << " phishing verdicts\n";
    }
    return phishing > 0 ? kExitPhishingFound : 0;
}

// --- evaluate ------------------------------------------------------------------

int cmd_evaluate(const GlobalArgs& global, const ToolConfig& config,
                 const std::string& snapshot_path, const std::string& fixture_path,
                 const std::optional<std::string>& provider_view_path,
                 const std::optional<std::string>& probe_path) {
    const TranscribedSnapshot snapshot =
        parse_snapshot_json(read_text_file(snapshot_path));
    const LoadedHistory ground = load_fixture(fixture_path);
    const auto verdicts =
        analyze_history(ground.history, config.registry, config.detector);

    const VisibleSet visible = displayed_union(snapshot);
    ScoreCard card = make_scorecard(visible, verdicts);

    std::optional<AttributionResult> attribution;
    if (provider_view_path) {
        const LoadedHistory provider = load_fixture(*provider_view_path);
        std::set<TransferKey> view;
        for (const TransferRecord& record : provider.history.transfers) {
            view.insert(key_of(record));
        }
        attribution = attribute_filtering(verdicts, view, visible);
        for (const std::string& warning : attribution->warnings) {
            std::cerr << "warning: " << warning << "\n";
        }
    }

    if (card.usability == 0 && probe_path) {
        const json probe = json::parse(read_text_file(*probe_path), nullptr, false);
        if (probe.is_discarded() || !probe.contains("diagnosis")) {
            throw SchemaError("/diagnosis", "probe report missing diagnosis");
        }
        ProviderDiagnosis parsed;
        const std::string kind = probe["diagnosis"].get<std::string>();
        for (DiagnosisKind candidate :
             {DiagnosisKind::Ok, DiagnosisKind::NotFound, DiagnosisKind::Forbidden,
              DiagnosisKind::EmptyBody, DiagnosisKind::RejectedRequest,
              DiagnosisKind::Timeout, DiagnosisKind::MalformedPayload}) {
            if (to_string(candidate) == kind) parsed.kind = candidate;
        }
        if (probe.contains("httpStatus")) parsed.http_status = probe["httpStatus"];
        card.diagnosis = diagnose_zero_usability(parsed);
    }

    std::cout << scorecard_to_json(card, attribution);
    if (!global.json_output) {
        std::cerr << "usability " << card.usability << ", risk " << card.risk << "\n";
    }
    return card.risk;
}

// --- vanity --------------------------------------------------------------------

int cmd_vanity(const GlobalArgs& global, const std::string& target_text, unsigned prefix,
               unsigned suffix, uint64_t budget, unsigned workers, bool reveal) {
    const Address target = parse_cli_address(target_text);
    SearchOptions options;
    options.seed = global.seed;
    options.workers = workers ? workers : std::max(1u, std::thread::hardware_concurrency());

    const auto result = targeted_search(target, prefix, suffix, budget, options);

    json doc;
    doc["target"] = checksum_encode(target);
    doc["thresholds"] = {{"minPrefix", prefix}, {"minSuffix", suffix}};
    if (result) {
        doc["found"] = true;
        doc["address"] = checksum_encode(result->key.address);
        if (reveal) {
            doc["secret"] =
                to_hex(std::span<const uint8_t>(result->key.secret.data(), 32));
        }
        doc["candidatesTried"] = result->stats.candidates_tried;
        doc["elapsedMs"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(result->stats.elapsed)
                .count();
        doc["throughputPerSec"] = result->stats.throughput;
    } else {
        doc["found"] = false;
        doc["candidatesTried"] = budget;
    }

    if (global.json_output) {
        std::cout << doc.dump(2) << "\n";
    } else if (result) {
        std::cout << "found " << checksum_encode(result->key.address) << " after "
                  << result->stats.candidates_tried << " candidates ("
                  << static_cast<uint64_t>(result->stats.throughput) << "/s)\n";
        if (reveal) {
            std::cout << "secret "
                      << to_hex(std::span<const uint8_t>(result->key.secret.data(), 32))
                      << "\n";
        } else {
            std::cout << "secret withheld (pass --reveal to print it)\n";
        }
    } else {
        std::cout << "no match within " << budget << " candidates\n";
    }
    return result ? 0 : kExitSearchExhausted;
}

// --- check ---------------------------------------------------------------------

int cmd_check(const GlobalArgs& global, const ToolConfig& config,
              const std::string& recipient_text,
              const std::vector<std::string>& flaglist_paths,
              const std::optional<std::string>& history_path,
              const std::optional<std::string>& contacts_path,
              std::optional<uint64_t> current_block) {
    const Address recipient = parse_cli_address(recipient_text);

    std::vector<FlagList> flags;
    for (const std::string& path : flaglist_paths) {
        const bool remote =
            path.rfind("http://", 0) == 0 || path.rfind("https://", 0) == 0;
        LoadedFlagList loaded = remote ? fetch_flaglist(path) : load_flaglist(path);
        for (const std::string& error : loaded.line_errors) {
            std::cerr << "warning: " << path << " " << error << "\n";
        }
        flags.push_back(std::move(loaded.list));
    }

    Address owner;
    std::vector<Verdict> verdicts;
    if (history_path) {
        const LoadedHistory loaded = load_fixture(*history_path);
        owner = loaded.history.owner;
        verdicts = analyze_history(loaded.history, config.registry, config.detector);
    }

    std::set<Address> contacts;
    if (contacts_path) {
        const LoadedFlagList loaded = load_flaglist(*contacts_path);
        for (const std::string& error : loaded.line_errors) {
            std::cerr << "warning: " << *contacts_path << " " << error << "\n";
        }
        contacts = loaded.list.addresses;
    }

    GuardConfig guard = config.guard;
    if (current_block) guard.current_block = current_block;

    const GuardResult result =
        check_recipient(recipient, flags, owner, verdicts, contacts, guard);

    if (global.json_output) {
        json doc;
        doc["recipient"] = checksum_encode(recipient);
        doc["level"] = std::string(to_string(result.level));
        doc["levelCode"] = static_cast<int>(result.level);
        doc["reasons"] = result.reasons;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << to_string(result.level) << ": " << checksum_encode(recipient)
                  << "\n";
        for (const std::string& reason : result.reasons) {
            std::cout << "  - " << reason << "\n";
        }
    }
    return static_cast<int>(result.level);
}

// --- fetch ---------------------------------------------------------------------

int cmd_fetch(const GlobalArgs& global, const ToolConfig& config,
              const std::string& endpoint, const std::string& address_text,
              const std::string& out_path) {
    FetchOptions options;
    options.api_key = config.api_key;
    const FetchResult result =
        fetch_history(endpoint, parse_cli_address(address_text), options);

    save_fixture(result.history, out_path);
    write_text_file(out_path + ".probe.json", probe_report_to_json(result.probe));

    if (global.json_output) {
        std::cout << probe_report_to_json(result.probe);
    } else {
        std::cout << "diagnosis: " << to_string(result.diagnosis.kind) << "\n"
                  << "transfers: " << result.history.transfers.size()
                  << (result.truncated ? " (truncated)" : "") << "\n"
                  << "wrote " << out_path << " and " << out_path << ".probe.json\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"address-poisoning simulator and wallet-feed auditor"};
    app.require_subcommand(1);

    GlobalArgs global;
    std::string config_path_raw;
    app.add_option("--config", config_path_raw, "JSON config file")
        ->envname("POISONGUARD_CONFIG");
    uint64_t seed_raw = 0;
    auto* seed_opt = app.add_option("--seed", seed_raw,
                                    "deterministic seed (insecure, for tests/fixtures)");
    app.add_flag("--json", global.json_output, "machine-readable output only");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "generate a look-alike pair and write the poisoning fixture");
    std::string sim_out;
    std::optional<std::string> sim_victim, sim_benign, sim_phishing;
    unsigned sim_prefix = 4, sim_suffix = 4;
    uint64_t sim_n = 200'000, sim_base_block = 1'000'000;
    simulate->add_option("out", sim_out, "fixture output path")->required();
    simulate->add_option("--victim", sim_victim, "victim address (derived if omitted)");
    simulate->add_option("--benign", sim_benign, "benign address (skips the search)");
    simulate->add_option("--phishing", sim_phishing, "phishing address (skips the search)");
    simulate->add_option("--prefix", sim_prefix, "look-alike prefix length");
    simulate->add_option("--suffix", sim_suffix, "look-alike suffix length");
    simulate->add_option("--n", sim_n, "keys to generate for the pair search");
    simulate->add_option("--base-block", sim_base_block, "first block number");

    // scan
    auto* scan = app.add_subcommand("scan", "classify a history and report phishing");
    std::optional<std::string> scan_fixture, scan_address, scan_out, scan_endpoint,
        scan_apikey, scan_dust_eth;
    std::vector<std::string> scan_dust_tokens;
    std::string scan_window;
    scan->add_option("fixture", scan_fixture, "history fixture to scan");
    scan->add_option("--endpoint", scan_endpoint, "provider endpoint to fetch from");
    scan->add_option("--address", scan_address, "account to fetch (with --endpoint)");
    scan->add_option("--apikey", scan_apikey, "provider API key (or env:NAME)");
    scan->add_option("--out", scan_out, "write the verdict report here");
    scan->add_option("--dust-eth", scan_dust_eth, "native dust ceiling, human units");
    scan->add_option("--dust-token", scan_dust_tokens, "SYMBOL=AMOUNT dust ceiling");
    scan->add_option("--window", scan_window, "match window: past | all");
    std::optional<unsigned> scan_prefix, scan_suffix;
    scan->add_option("--prefix", scan_prefix, "look-alike prefix threshold");
    scan->add_option("--suffix", scan_suffix, "look-alike suffix threshold");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a wallet feed snapshot");
    std::string eval_snapshot, eval_fixture;
    std::optional<std::string> eval_provider_view, eval_probe;
    evaluate->add_option("snapshot", eval_snapshot, "feed snapshot JSON")->required();
    evaluate->add_option("fixture", eval_fixture, "ground-truth history fixture")
        ->required();
    evaluate->add_option("--provider-view", eval_provider_view,
                         "fixture of what the provider returned");
    evaluate->add_option("--probe", eval_probe, "probe report for zero-usability feeds");

    // vanity
    auto* vanity = app.add_subcommand("vanity", "search for a look-alike of an address");
    std::string vanity_target;
    unsigned vanity_prefix = 4, vanity_suffix = 4, vanity_workers = 0;
    uint64_t vanity_budget = 1'000'000;
    bool vanity_reveal = false;
    vanity->add_option("target", vanity_target, "address to imitate")->required();
    vanity->add_option("--prefix", vanity_prefix, "hex chars to match at the front");
    vanity->add_option("--suffix", vanity_suffix, "hex chars to match at the back");
    vanity->add_option("--budget", vanity_budget, "max candidates");
    vanity->add_option("--workers", vanity_workers, "worker threads (0 = all cores)");
    vanity->add_flag("--reveal", vanity_reveal, "print the secret key");

    // check
    auto* check = app.add_subcommand("check", "vet a recipient before sending");
    std::string check_recipient_text;
    std::vector<std::string> check_flaglists;
    std::optional<std::string> check_history, check_contacts;
    std::optional<uint64_t> check_current_block;
    check->add_option("recipient", check_recipient_text, "recipient address")->required();
    check->add_option("--flaglist", check_flaglists, "flag list file (repeatable)");
    check->add_option("--history", check_history, "history fixture to analyze");
    check->add_option("--contacts", check_contacts, "contacts file, one address per line");
    check->add_option("--current-block", check_current_block,
                      "reference block for staleness");
    std::optional<unsigned> check_prefix, check_suffix;
    check->add_option("--prefix", check_prefix, "look-alike prefix threshold");
    check->add_option("--suffix", check_suffix, "look-alike suffix threshold");

    // fetch
    auto* fetch = app.add_subcommand("fetch", "download a history and probe the provider");
    std::string fetch_endpoint, fetch_address, fetch_out;
    std::optional<std::string> fetch_apikey;
    fetch->add_option("endpoint", fetch_endpoint, "provider base URL")->required();
    fetch->add_option("address", fetch_address, "account address")->required();
    fetch->add_option("out", fetch_out, "fixture output path")->required();
    fetch->add_option("--apikey", fetch_apikey, "provider API key (or env:NAME)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (seed_opt->count() > 0) global.seed = seed_raw;
    if (!config_path_raw.empty()) global.config_path = config_path_raw;

    try {
        ToolConfig config = load_tool_config(
            global.config_path ? std::optional<std::filesystem::path>(*global.config_path)
                               : std::nullopt);

        if (simulate->parsed()) {
            return cmd_simulate(global, config, sim_out, sim_victim, sim_benign,
                                sim_phishing, sim_prefix, sim_suffix, sim_n,
                                sim_base_block);
        }
        if (scan->parsed()) {
            apply_dust_overrides(config, scan_dust_eth, scan_dust_tokens);
            if (scan_prefix) config.detector.lookalike.min_prefix = *scan_prefix;
            if (scan_suffix) config.detector.lookalike.min_suffix = *scan_suffix;
            if (scan_endpoint) config.endpoint = scan_endpoint;
            if (scan_apikey) config.api_key = resolve_api_key(*scan_apikey);
            if (!scan_window.empty()) {
                if (scan_window == "past") {
                    config.detector.match_window = MatchWindow::PastOnly;
                } else if (scan_window == "all") {
                    config.detector.match_window = MatchWindow::PastAndFuture;
                } else {
                    throw Error("--window must be past or all");
                }
            }
            return cmd_scan(global, config, scan_fixture, scan_address, scan_out);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(global, config, eval_snapshot, eval_fixture,
                                eval_provider_view, eval_probe);
        }
        if (vanity->parsed()) {
            return cmd_vanity(global, vanity_target, vanity_prefix, vanity_suffix,
                              vanity_budget, vanity_workers, vanity_reveal);
        }
        if (check->parsed()) {
            if (check_prefix) {
                config.detector.lookalike.min_prefix = *check_prefix;
                config.guard.lookalike.min_prefix = *check_prefix;
            }
            if (check_suffix) {
                config.detector.lookalike.min_suffix = *check_suffix;
                config.guard.lookalike.min_suffix = *check_suffix;
            }
            return cmd_check(global, config, check_recipient_text, check_flaglists,
                             check_history, check_contacts, check_current_block);
        }
        if (fetch->parsed()) {
            if (fetch_apikey) config.api_key = resolve_api_key(*fetch_apikey);
            return cmd_fetch(global, config, fetch_endpoint, fetch_address, fetch_out);
        }
        return kExitUsage;
    } catch (const SearchExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchExhausted;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitSoftware;
    }
}
