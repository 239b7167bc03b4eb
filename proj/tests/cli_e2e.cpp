// End-to-end checks of the command-line tool: exit codes, file outputs, and
// JSON schemas, driven through the real binary (POISONGUARD_BIN).

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "poisonguard/attack.hpp"
#include "poisonguard/feed.hpp"
#include "poisonguard/hex.hpp"
#include "poisonguard/ingest.hpp"
#include "poisonguard/reports.hpp"
#include "scenario_fixture.hpp"

using namespace poisonguard;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

std::string binary_path() {
    const char* bin = std::getenv("POISONGUARD_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "POISONGUARD_BIN must point at the CLI binary");
    return bin;
}

RunResult run_cli(const std::string& args) {
    const std::string command = binary_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buffer[4096];
    size_t got;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("poisonguard-e2e-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string shipped_fixture() {
    return std::string(POISONGUARD_FIXTURE_DIR) + "/table1.json";
}

std::string shipped_flaglist() {
    return std::string(POISONGUARD_FIXTURE_DIR) + "/flagged.txt";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

// A snapshot JSON whose display states follow one survey row shape.
std::string snapshot_json_for(const AccountHistory& history,
                              const wallet_rows::WalletRow& row) {
    const auto analyzed = scenario_fixture::analyzed_scenario();
    const VisibleSet visible = scenario_fixture::visible_set_for_row(row, analyzed);
    json entries_all = json::array();
    for (const TransferRecord& record : history.transfers) {
        const auto it = visible.find(key_of(record));
        json item;
        item["hash"] = to_hex(record.tx_hash);
        if (record.log_index) item["logIndex"] = *record.log_index;
        item["state"] = it == visible.end()
                            ? "hidden"
                            : std::string(to_string(it->second));
        entries_all.push_back(item);
    }
    json doc;
    doc["design"] = "oneForAll";
    doc["entries"] = {{"all", entries_all}};
    return doc.dump();
}

const wallet_rows::WalletRow& row_named(const char* name) {
    for (const auto& row : wallet_rows::kRows) {
        if (std::string_view(row.name) == name) return row;
    }
    FAIL("no such row");
    return wallet_rows::kRows[0];
}

}  // namespace

TEST_CASE("shipped fixture matches the canonical scenario") {
    const LoadedHistory loaded = load_fixture(shipped_fixture());
    const auto analyzed = scenario_fixture::analyzed_scenario();
    CHECK(loaded.history.owner == analyzed.scenario.history.owner);
    CHECK(loaded.history.transfers == analyzed.scenario.history.transfers);
    CHECK(loaded.warnings.empty());
}

TEST_CASE("simulate writes a fixture and its provenance sidecar") {
    TempDir dir;
    const std::string out = dir.file("scenario.json");
    const RunResult result = run_cli("--seed 5 --json simulate " + out +
                                     " --prefix 2 --suffix 2 --n 4000");
    REQUIRE(result.exit_code == 0);

    const LoadedHistory loaded = load_fixture(out);
    CHECK(loaded.history.transfers.size() == 10);

    const json sidecar = json::parse(std::ifstream(out + ".provenance.json"));
    CHECK(sidecar["seed"] == 5);
    CHECK(sidecar["thresholds"]["minPrefix"] == 2);
    CHECK(sidecar["pairsFound"].get<uint64_t>() >= 1);
    CHECK(sidecar["keysGenerated"].get<uint64_t>() >= 4000);

    // The pair that built the fixture is a real look-alike.
    const Address benign = address_from_hex(sidecar["benign"].get<std::string>());
    const Address phishing = address_from_hex(sidecar["phishing"].get<std::string>());
    CHECK(is_lookalike(benign, phishing, LookalikeThresholds{2, 2}));

    // Determinism: the same seed reproduces the same pair.
    const std::string out2 = dir.file("scenario2.json");
    const RunResult again = run_cli("--seed 5 --json simulate " + out2 +
                                    " --prefix 2 --suffix 2 --n 4000");
    REQUIRE(again.exit_code == 0);
    CHECK(json::parse(std::ifstream(out2 + ".provenance.json"))["benign"] ==
          sidecar["benign"]);
}

TEST_CASE("scan exits 5 on the poisoned fixture with eight phishing verdicts") {
    const RunResult result = run_cli("--json scan " + shipped_fixture());
    CHECK(result.exit_code == 5);
    const json report = json::parse(result.output);
    REQUIRE(report.is_array());
    REQUIRE(report.size() == 10);
    int phishing = 0;
    for (const auto& verdict : report) phishing += verdict["phishing"].get<bool>();
    CHECK(phishing == 8);
    // Matched rows carry the counterparty and the similarity evidence.
    CHECK(report[1]["matchedCounterparty"] == scenario_fixture::kBenignHex);
    CHECK(report[1]["prefixMatch"] == 4);
    CHECK(report[1]["suffixMatch"] == 4);
}

TEST_CASE("scan exits 0 on a legit-only fixture") {
    TempDir dir;
    AccountHistory history;
    history.owner = scenario_fixture::victim();
    TransferRecord record;
    record.block = 1'000'000;
    record.from = scenario_fixture::benign();
    record.to = history.owner;
    record.amount = BigUint::pow10(18);
    record.tx_hash = keccak256(std::string_view("legit-only"));
    history.transfers.push_back(record);
    save_fixture(history, dir.file("legit.json"));

    const RunResult result = run_cli("scan " + dir.file("legit.json"));
    CHECK(result.exit_code == 0);
}

TEST_CASE("scan writes the report file with --out") {
    TempDir dir;
    const std::string report_path = dir.file("report.json");
    const RunResult result =
        run_cli("scan " + shipped_fixture() + " --out " + report_path);
    CHECK(result.exit_code == 5);
    const json report = json::parse(std::ifstream(report_path));
    CHECK(report.size() == 10);
}

TEST_CASE("evaluate exit code carries the risk level") {
    TempDir dir;
    const auto analyzed = scenario_fixture::analyzed_scenario();

    SUBCASE("all-shown snapshot scores risk 4") {
        write_file(dir.file("snap.json"),
                   snapshot_json_for(analyzed.scenario.history, row_named("Bybit")));
        const RunResult result =
            run_cli("evaluate " + dir.file("snap.json") + " " + shipped_fixture());
        CHECK(result.exit_code == 4);
        const json card = json::parse(result.output);
        CHECK(card["usability"] == 2);
        CHECK(card["risk"] == 4);
    }

    SUBCASE("dust-only snapshot scores risk 1") {
        write_file(dir.file("snap.json"),
                   snapshot_json_for(analyzed.scenario.history, row_named("Bitget")));
        CHECK(run_cli("evaluate " + dir.file("snap.json") + " " + shipped_fixture())
                  .exit_code == 1);
    }

    SUBCASE("empty snapshot scores zero everything") {
        write_file(dir.file("snap.json"), R"({"design":"oneForAll","entries":{}})");
        const RunResult result =
            run_cli("evaluate " + dir.file("snap.json") + " " + shipped_fixture());
        CHECK(result.exit_code == 0);
        const json card = json::parse(result.output);
        CHECK(card["usability"] == 0);
        CHECK(card["risk"] == 0);
    }

    SUBCASE("provider view enables attribution in the scorecard") {
        write_file(dir.file("snap.json"),
                   snapshot_json_for(analyzed.scenario.history, row_named("Rabby")));
        // Provider omitted the zero-ETH transfer (index 1).
        AccountHistory provider_view = analyzed.scenario.history;
        provider_view.transfers.erase(provider_view.transfers.begin() + 1);
        save_fixture(provider_view, dir.file("provider.json"));

        const RunResult result =
            run_cli("evaluate " + dir.file("snap.json") + " " + shipped_fixture() +
                    " --provider-view " + dir.file("provider.json"));
        CHECK(result.exit_code == 2);
        const json card = json::parse(result.output);
        REQUIRE(card.contains("attribution"));
        const std::string zero_eth_id =
            to_hex(analyzed.scenario.history.transfers[1].tx_hash);
        CHECK(card["attribution"][zero_eth_id] == "provider");
    }

    SUBCASE("probe report explains a zero-usability feed") {
        write_file(dir.file("snap.json"), R"({"design":"oneForAll","entries":{}})");
        write_file(dir.file("probe.json"),
                   R"({"endpoint":"x","httpStatus":403,"diagnosis":"forbidden","bodyBytes":0})");
        const RunResult result =
            run_cli("evaluate " + dir.file("snap.json") + " " + shipped_fixture() +
                    " --probe " + dir.file("probe.json"));
        CHECK(result.exit_code == 0);
        const json card = json::parse(result.output);
        CHECK(card["diagnosis"] == "provider rejected request (HTTP 403)");
    }
}

TEST_CASE("check exit codes mirror the warning ladder") {
    TempDir dir;

    SUBCASE("flag-listed recipient alerts (exit 3)") {
        const std::string flagged = "0x" + ("a7bf487" + std::string(27, '0') + "e90570");
        const RunResult result =
            run_cli("check " + flagged + " --flaglist " + shipped_flaglist());
        CHECK(result.exit_code == 3);
    }

    SUBCASE("detected phishing sender alerts (exit 3)") {
        const RunResult result =
            run_cli(std::string("--json check ") + scenario_fixture::kPhishingHex +
                    " --history " + shipped_fixture());
        CHECK(result.exit_code == 3);
        const json doc = json::parse(result.output);
        CHECK(doc["level"] == "alert");
        bool reason_found = false;
        for (const auto& reason : doc["reasons"]) {
            reason_found |= reason.get<std::string>().find("phishing") !=
                            std::string::npos;
        }
        CHECK(reason_found);
    }

    SUBCASE("fresh recipient needs confirmation (exit 2)") {
        const std::string fresh = "0x" + std::string(38, '9') + "10";
        CHECK(run_cli("check " + fresh).exit_code == 2);
    }

    SUBCASE("contact is clear (exit 0)") {
        const std::string contact = "0x" + std::string(38, '9') + "10";
        write_file(dir.file("contacts.txt"), contact + "\n");
        CHECK(run_cli("check " + contact + " --contacts " + dir.file("contacts.txt"))
                  .exit_code == 0);
    }

    SUBCASE("stale counterparty reminds (exit 1)") {
        const RunResult result = run_cli(
            std::string("check ") + scenario_fixture::kBenignHex + " --history " +
            shipped_fixture() + " --current-block 2000000");
        CHECK(result.exit_code == 1);
    }
}

TEST_CASE("vanity search") {
    TempDir dir;
    const std::string target = scenario_fixture::kVictimHex;

    SUBCASE("trivial thresholds succeed instantly, secret withheld") {
        const RunResult result =
            run_cli("--seed 1 --json vanity " + target +
                    " --prefix 0 --suffix 0 --budget 1 --workers 1");
        CHECK(result.exit_code == 0);
        const json doc = json::parse(result.output);
        CHECK(doc["found"] == true);
        CHECK(doc["candidatesTried"] == 1);
        CHECK_FALSE(doc.contains("secret"));
    }

    SUBCASE("--reveal prints the secret and it derives the address") {
        const RunResult result =
            run_cli("--seed 2 --json vanity " + target +
                    " --prefix 1 --suffix 1 --budget 100000 --workers 1 --reveal");
        CHECK(result.exit_code == 0);
        const json doc = json::parse(result.output);
        REQUIRE(doc.contains("secret"));
        std::array<uint8_t, 32> secret{};
        const auto bytes = parse_hex_bytes(doc["secret"].get<std::string>());
        REQUIRE(bytes.size() == 32);
        std::copy(bytes.begin(), bytes.end(), secret.begin());
        CHECK(checksum_encode(derive_keypair(secret).address) == doc["address"]);
    }

    SUBCASE("exhausted budget exits 6") {
        const RunResult result = run_cli("--seed 3 vanity " + target +
                                         " --prefix 4 --suffix 4 --budget 10");
        CHECK(result.exit_code == 6);
    }
}

TEST_CASE("fetch writes the fixture and probe report") {
    httplib::Server server;
    const auto analyzed = scenario_fixture::analyzed_scenario();
    server.Get("/good/", [&](const httplib::Request& req, httplib::Response& res) {
        const std::string action = req.get_param_value("action");
        const int page = std::stoi(req.get_param_value("page"));
        json rows = json::array();
        if (page == 1) {
            for (const TransferRecord& record : analyzed.scenario.history.transfers) {
                if (is_native(record.asset) != (action == "txlist")) continue;
                json row;
                row["hash"] = to_hex(record.tx_hash);
                row["blockNumber"] = std::to_string(record.block);
                row["from"] = lower_hex(record.from);
                row["to"] = lower_hex(record.to);
                row["value"] = record.amount.to_decimal();
                if (const TokenAsset* token = as_token(record.asset)) {
                    row["contractAddress"] = lower_hex(token->contract);
                    row["tokenSymbol"] = token->symbol_claim;
                    row["tokenDecimal"] = std::to_string(token->decimals);
                    row["logIndex"] = std::to_string(*record.log_index);
                }
                rows.push_back(row);
            }
        }
        json doc;
        doc["status"] = "1";
        doc["message"] = "OK";
        doc["result"] = rows;
        res.set_content(doc.dump(), "application/json");
    });
    server.Get("/empty/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("", "text/plain");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread serving([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port);

    TempDir dir;
    SUBCASE("healthy endpoint") {
        const std::string out = dir.file("fetched.json");
        const RunResult result = run_cli(std::string("fetch ") + base + "/good " +
                                         scenario_fixture::kVictimHex + " " + out);
        CHECK(result.exit_code == 0);
        const LoadedHistory loaded = load_fixture(out);
        CHECK(loaded.history.transfers.size() == 10);
        const json probe = json::parse(std::ifstream(out + ".probe.json"));
        CHECK(probe["diagnosis"] == "ok");
    }

    SUBCASE("empty-body endpoint still produces both files") {
        const std::string out = dir.file("empty.json");
        const RunResult result = run_cli(std::string("fetch ") + base + "/empty " +
                                         scenario_fixture::kVictimHex + " " + out);
        CHECK(result.exit_code == 0);
        CHECK(load_fixture(out).history.transfers.empty());
        const json probe = json::parse(std::ifstream(out + ".probe.json"));
        CHECK(probe["diagnosis"] == "emptyBody");
        CHECK(probe["httpStatus"] == 200);
    }

    SUBCASE("scan of a healthy endpoint finds the phishing verdicts") {
        const RunResult result =
            run_cli(std::string("--json scan --endpoint ") + base + "/good --address " +
                    scenario_fixture::kVictimHex);
        CHECK(result.exit_code == 5);
        CHECK(json::parse(result.output).size() == 10);
    }

    server.stop();
    serving.join();
}

TEST_CASE("scan of a forbidden endpoint warns and exits clean") {
    httplib::Server server;
    server.Get("/api/", [](const httplib::Request&, httplib::Response& res) {
        res.status = 403;
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread serving([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    const RunResult result =
        run_cli("--json scan --endpoint http://127.0.0.1:" + std::to_string(port) +
                "/api --address " + std::string(scenario_fixture::kVictimHex));
    CHECK(result.exit_code == 0);
    CHECK(json::parse(result.output).empty());  // empty verdict report

    server.stop();
    serving.join();
}

TEST_CASE("dust threshold flags reshape classification") {
    // Raising the native ceiling above 0.001 ETH turns the legitimate ETH
    // transfer into dust. That removes the anchor for the ETH-side zero/dust
    // rows (nothing legitimate precedes them any more), while the USDT side
    // still anchors on the later legitimate USDT transfer.
    const RunResult result =
        run_cli("--json scan " + shipped_fixture() + " --dust-eth 0.002");
    CHECK(result.exit_code == 5);
    const json report = json::parse(result.output);
    int phishing = 0, dust = 0;
    for (const auto& verdict : report) {
        phishing += verdict["phishing"].get<bool>();
        dust += verdict["class"] == "dustValue";
    }
    CHECK(dust == 3);  // legit-ETH joins the two dust rows
    CHECK(phishing == 6);  // four fakes + the matched zero/dust USDT rows
}

TEST_CASE("simulate to an unwritable path exits with the IO code") {
    CHECK(run_cli("simulate /nonexistent-dir/out.json --benign " +
                  std::string(scenario_fixture::kBenignHex) + " --phishing " +
                  scenario_fixture::kPhishingHex)
              .exit_code == 74);
}

TEST_CASE("registry file extends the config") {
    TempDir dir;
    // A second "USDT" contract becomes legitimate, so the fixture's fake-USDT
    // rows still classify as fakes (different contract), but the config
    // machinery proves out end to end.
    write_file(dir.file("registry.json"),
               R"({"tokens":[{"symbol":"USDC",
                   "contract":"0xA0b86991c6218b36c1d19D4a2e9Eb0cE3606eB48",
                   "decimals":6}],"native":"ETH"})");
    write_file(dir.file("config.json"),
               std::string(R"({"registryFile":")") + dir.file("registry.json") + "\"}");
    const RunResult result = run_cli("--config " + dir.file("config.json") +
                                     " --json scan " + shipped_fixture());
    CHECK(result.exit_code == 5);
    CHECK(json::parse(result.output).size() == 10);
}

TEST_CASE("usage errors exit in the 64+ range") {
    CHECK(run_cli("frobnicate").exit_code == 64);
    CHECK(run_cli("scan").exit_code == 65);          // no input source
    CHECK(run_cli("check not-an-address").exit_code == 65);
    CHECK(run_cli("scan /nonexistent/fixture.json").exit_code == 74);
}
