// End-to-end checks of the CLI: output schemas, provenance headers,
// determinism, and exit codes. Runs the installed binary via std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

using json = nlohmann::json;

namespace {

#ifndef VINODEC_CLI_PATH
#error "VINODEC_CLI_PATH must point at the built binary"
#endif

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                                 "/vinodec_cli_stdout.txt";
    const std::string command =
        std::string(VINODEC_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    result.stdout_text = text.str();
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string strip_elapsed(std::string text) {
    // elapsed fields are the one permitted nondeterminism
    return std::regex_replace(text, std::regex("\"elapsed_ms\":\\s*\"[^\"]*\""),
                              "\"elapsed_ms\": \"X\"");
}

} // namespace

TEST_CASE("count emits an exact J with provenance") {
    const RunResult r = run_cli("count --k 2 --s 3 --N 2");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    CHECK(doc["config"]["command"] == "count");
    CHECK(doc["config"]["k"] == "2");
    CHECK(doc["config"]["s"] == "3");
    CHECK(doc["config"]["N"] == "2");
    CHECK(doc["config"].contains("seed"));
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["J"] == "20");
    CHECK_FALSE(doc["rows"][0].contains("ok"));  // single cells match the schema
}

TEST_CASE("count sweep emits rho and slope rows and isolates failures") {
    const RunResult r =
        run_cli("count --k 2 --s 3 --N 4,1024,8 --budget-bytes 16000000");
    CHECK(r.exit_code == 0);  // some cells succeeded
    const json doc = json::parse(r.stdout_text);
    REQUIRE(doc["rows"].size() == 3);
    CHECK(doc["rows"][0]["ok"] == 1);
    CHECK(doc["rows"][1]["ok"] == 0);
    CHECK(doc["rows"][1]["error"] == "resource");
    CHECK(doc["rows"][2]["ok"] == 1);
    CHECK(doc["rows"][0].contains("rho"));
    CHECK(doc["summary"].contains("slope_log_J"));
}

TEST_CASE("count CSV carries the config header and schema columns") {
    const std::string path = "/tmp/vinodec_test_count.csv";
    const RunResult r =
        run_cli("count --k 2 --s 3 --N 64 --out " + path + " --format csv");
    REQUIRE(r.exit_code == 0);
    const std::string text = read_file(path);
    CHECK(text.find("# command=count") != std::string::npos);
    CHECK(text.find("# seed=0") != std::string::npos);
    CHECK(text.find("k,s,N,J,distinct_vectors,elapsed_ms") != std::string::npos);
    CHECK(text.find("2,3,64,2413144,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("whitney emits one record per square") {
    const std::string path = "/tmp/vinodec_test_squares.jsonl";
    const RunResult r = run_cli("whitney --N 2 --emit " + path);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    CHECK(doc["rows"][0]["cover_squares"] == 16);
    CHECK(doc["rows"][0]["area"] == "1");
    CHECK(doc["rows"][0]["interiors_disjoint"] == true);

    std::ifstream in(path);
    std::string line;
    int lines = 0, diagonal = 0;
    while (std::getline(in, line)) {
        const json rec = json::parse(line);
        CHECK(rec.contains("scale"));
        CHECK(rec.contains("i"));
        CHECK(rec.contains("j"));
        if (rec["class"] == "diagonal") ++diagonal;
        ++lines;
    }
    CHECK(lines == 16);
    CHECK(diagonal == 10);
    std::remove(path.c_str());
}

TEST_CASE("exponents verification output") {
    const RunResult r = run_cli("exponents --k 4 --verify");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    const json& row = doc["rows"][0];
    CHECK(row["p_k"] == 20);
    CHECK(row["left_vector_ok"] == true);
    CHECK(row["eta_coefficient"] == "3/4");
    CHECK(row["M"][0] == json::array({"0", "0", "1"}));
    CHECK(row["M"][1] == json::array({"2/3", "1/2", "0"}));
    CHECK(row["M"][2] == json::array({"1/3", "1/2", "0"}));
    CHECK(row["c"] == json::array({"3/4", "0", "0"}));
}

TEST_CASE("ratio report fields") {
    const RunResult r = run_cli("ratio --k 2 --N 2");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    const json& row = doc["rows"][0];
    CHECK(row["k"] == 2);
    CHECK(row["N"] == 2);
    CHECK(row["p"] == 6);
    CHECK(row["converged"] == true);
    CHECK(row["model"] == "periodic-single-frequency");
    CHECK(std::stod(row["value"].get<std::string>()) ==
          doctest::Approx(std::pow(20.0, 1.0 / 6.0) / std::sqrt(2.0)));
}

TEST_CASE("growth sweep summary") {
    const RunResult r = run_cli("growth --k 2 --N 4,8,16,32");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    CHECK(doc["rows"].size() == 4);
    const double slope = std::stod(doc["summary"]["slope"].get<std::string>());
    CHECK(slope > 0.0);
    CHECK(slope < 0.2);
}

TEST_CASE("geometry transversality table") {
    const RunResult r = run_cli("geometry --op transversality-table --k-min 2 --k-max 5");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    CHECK(doc["summary"]["all_match"] == true);
    // k rows: sum over k of (k-1) splits
    CHECK(doc["rows"].size() == 1 + 2 + 3 + 4);
    CHECK(doc["rows"][0]["expected"] == "2");
}

TEST_CASE("identical configs produce identical bytes apart from elapsed fields") {
    const std::string a = "/tmp/vinodec_det_a.json";
    const std::string b = "/tmp/vinodec_det_b.json";
    REQUIRE(run_cli("count --k 2 --s 3 --N 4,8,16 --seed 7 --out " + a).exit_code == 0);
    REQUIRE(run_cli("count --k 2 --s 3 --N 4,8,16 --seed 7 --out " + b).exit_code == 0);
    CHECK(strip_elapsed(read_file(a)) == strip_elapsed(read_file(b)));
    std::remove(a.c_str());
    std::remove(b.c_str());

    // seeded random weights reproduce bit-identical reports
    const RunResult r1 = run_cli("ratio --k 2 --N 6 --weights random --seed 11");
    const RunResult r2 = run_cli("ratio --k 2 --N 6 --weights random --seed 11");
    CHECK(r1.stdout_text == r2.stdout_text);
}

TEST_CASE("weights files round through the CSV schema") {
    const std::string path = "/tmp/vinodec_test_weights.csv";
    {
        std::ofstream out(path);
        out << "n,re,im\n";
        for (int n = 1; n <= 4; ++n) out << n << "," << (n % 2 ? 1 : -1) << ",0\n";
    }
    const RunResult r = run_cli("moment --k 2 --s 2 --N 4 --weights file --weights-file " + path);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.stdout_text);
    CHECK(std::stod(doc["rows"][0]["value"].get<std::string>()) > 0.0);
    std::remove(path.c_str());
}

TEST_CASE("exit codes distinguish failure classes") {
    CHECK(run_cli("count --k 2 --s 3").exit_code == 2);          // missing --N
    CHECK(run_cli("nonsense").exit_code == 2);                   // unknown command
    CHECK(run_cli("geometry --op bogus").exit_code == 2);        // validation
    CHECK(run_cli("moment --k 3 --s 3 --N 64 --path quadrature --grid-budget 1000")
              .exit_code == 3);                                  // resource
    CHECK(run_cli("count --k 2 --s 3 --N 4096 --budget-bytes 1000000")
              .exit_code == 3);                                  // single cell over budget
    CHECK(run_cli("count --k 2 --s 4 --N 4096,8192 --budget-bytes 1000000")
              .exit_code == 5);                                  // all cells failed
}

TEST_CASE("config file overrides defaults and flags override the file") {
    const std::string cfg = "/tmp/vinodec_test_cfg.ini";
    {
        std::ofstream out(cfg);
        out << "seed=42\n";
        out << "budget-bytes=123456789\n";
    }
    const RunResult r = run_cli("--config " + cfg + " count --k 2 --s 2 --N 3");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.stdout_text);
    CHECK(doc["config"]["seed"] == "42");
    CHECK(doc["config"]["budget_bytes"] == "123456789");

    const RunResult over =
        run_cli("--config " + cfg + " --seed 9 count --k 2 --s 2 --N 3");
    REQUIRE(over.exit_code == 0);
    doc = json::parse(over.stdout_text);
    CHECK(doc["config"]["seed"] == "9");
    std::remove(cfg.c_str());
}

TEST_CASE("environment variable overrides the budget") {
    const std::string cmd = std::string("VINODEC_BUDGET_BYTES=55555 ") +
                            VINODEC_CLI_PATH + " count --k 2 --s 2 --N 3 > /tmp/vinodec_env.json";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const json doc = json::parse(read_file("/tmp/vinodec_env.json"));
    CHECK(doc["config"]["budget_bytes"] == "55555");
    std::remove("/tmp/vinodec_env.json");
}
