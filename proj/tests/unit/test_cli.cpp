#include "stark/config.hpp"
#include "stark/output.hpp"
#include "stark/runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace stark;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "stark_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(STARK_SPECTRA_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

RunConfig parse(const std::string& text, Mode mode = Mode::sweep) {
    std::istringstream in(text);
    return parse_config(in, mode);
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse(
        "[model]\nomega = 1\ngamma = 0.2\ndelta = 0.7\n"
        "[grid]\ng_start = 0\ng_stop = 3\ng_count = 61\n"
        "[solver]\nk_levels = 20\nn_trunc = 200\nparity = +\nsolver = dense\n"
        "[crosscheck]\nchecks = bic, harmonic\n"
        "[output]\nformat = json\npath = out.json\n");
    CHECK(c.params.gamma == 0.2);
    CHECK(c.grid.count == 61);
    CHECK(c.parity == Parity::positive);
    CHECK(c.solver == SolverKind::dense);
    CHECK_FALSE(c.check_gfunction);
    CHECK(c.check_bic);
    CHECK(c.format == OutputFormat::json);
    const auto g = c.grid.values();
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 3.0);
    CHECK(g[1] == doctest::Approx(0.05));

    CHECK_THROWS_AS(parse("[model]\nfrequency = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[nonsense]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[model]\nomega = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse("[model]\nomega = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[grid]\ng_count = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[grid]\ng_start = 1\ng_stop = 2\ng_count = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[solver]\nrel_tol = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[solver]\nparity = up\n"), ConfigError);
    CHECK_THROWS_AS(parse("[model]\ngamma = 1\n", Mode::gfunction), ConfigError);
    CHECK_THROWS_AS(parse_mode("plot"), ConfigError);
}

TEST_CASE("single-point grid") {
    const RunConfig c = parse("[grid]\ng_start = 0.4\ng_stop = 0.4\ng_count = 1\n");
    const auto g = c.grid.values();
    REQUIRE(g.size() == 1);
    CHECK(g[0] == 0.4);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(1e-20) == "9.9999999999999995e-21");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("sweep output is deterministic and self-describing") {
    RunConfig c = load_config(std::string(TEST_DATA_DIR) + "/sweep_small.ini", Mode::sweep);
    std::ostringstream log;
    c.output_path = scratch("a.csv").string();
    REQUIRE(run(c, log) == exit_ok);
    c.output_path = scratch("b.csv").string();
    c.threads = 4;
    REQUIRE(run(c, log) == exit_ok);

    const std::string a = slurp(scratch("a.csv"));
    CHECK(a == slurp(scratch("b.csv")));
    CHECK(a.rfind("g,level_index,energy,parity,photon_content,source\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
    std::size_t lines = 0;
    for (char ch : a) lines += ch == '\n';
    CHECK(lines == 1 + 11 * 8);

    const auto meta = nlohmann::json::parse(slurp(scratch("a.csv.meta.json")));
    CHECK(meta["schema_version"] == kSchemaVersion);
    CHECK(meta["settings"]["solver.n_trunc"] == "60");
    CHECK(meta["settings"]["solver.rel_tol"] == "1e-10");
    CHECK(meta["columns"].size() == 11);
    CHECK(meta["columns"][0]["max_residual"].get<double>() < 1e-9);
    CHECK(meta.contains("wall_time_seconds"));
}

TEST_CASE("json output") {
    RunConfig c = load_config(std::string(TEST_DATA_DIR) + "/sweep_small.ini", Mode::sweep);
    c.format = OutputFormat::json;
    c.output_path = scratch("s.json").string();
    std::ostringstream log;
    REQUIRE(run(c, log) == exit_ok);
    const auto doc = nlohmann::json::parse(slurp(scratch("s.json")));
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["rows"].size() == 11 * 8);
    CHECK(doc["rows"][0][5] == "exact_diag");
}

TEST_CASE("crosscheck in the Rabi limit") {
    RunConfig c = load_config(std::string(TEST_DATA_DIR) + "/crosscheck_qrm.ini", Mode::crosscheck);
    c.output_path = scratch("cc.csv").string();
    std::ostringstream log;
    REQUIRE(run(c, log) == exit_ok);
    const auto meta = nlohmann::json::parse(slurp(scratch("cc.csv.meta.json")));
    const double worst = meta["max_discrepancy"]["gfunction"].get<double>();
    MESSAGE("max |E_gfunc - E_ed| over the lowest 10 levels per parity: " << worst);
    CHECK(worst < 1e-7);
    const std::string csv = slurp(scratch("cc.csv"));
    CHECK(csv.rfind("check,g,level_index,parity,reference,candidate,discrepancy,tolerance,flag\n", 0) == 0);
}

TEST_CASE("other modes run") {
    std::ostringstream log;
    RunConfig c;
    c.grid = {0.1, 0.5, 3};
    c.params = {1.0, 0.2, 0.7, 0.0};
    for (Mode m : {Mode::gfunction, Mode::confluence, Mode::slowmode}) {
        c.mode = m;
        c.output_path = scratch(to_string(m) + ".csv").string();
        CAPTURE(to_string(m));
        CHECK(run(c, log) == exit_ok);
        CHECK(slurp(c.output_path).rfind("g,level_index,energy,parity,photon_content,source\n", 0) == 0);
    }
}

TEST_CASE("exit codes of the command-line tool") {
    const std::string data = TEST_DATA_DIR;
    CHECK(run_binary("sweep --config " + data + "/sweep_small.ini --out " + scratch("cli.csv").string()) == 0);
    CHECK(fs::exists(scratch("cli.csv.meta.json")));
    CHECK(run_binary("sweep --config " + data + "/bad_key.ini --out " + scratch("bad.csv").string()) == 2);
    CHECK(run_binary("sweep --config /nonexistent/run.ini") == 2);
    CHECK(run_binary("plot --config " + data + "/sweep_small.ini") == 2);
    CHECK(run_binary("sweep --config " + data + "/sweep_small.ini --out /nonexistent/dir/out.csv") == 4);
    CHECK(run_binary("sweep --config " + data + "/sweep_small.ini --threads 0") == 2);
    const std::string env = "STARK_SPECTRA_THREADS=3 ";
    const int status = std::system((env + STARK_SPECTRA_BIN + " sweep --config " + data + "/sweep_small.ini --out " +
                                    scratch("env.csv").string() + " > /dev/null 2>&1")
                                       .c_str());
    CHECK(WEXITSTATUS(status) == 0);
    const auto meta = nlohmann::json::parse(slurp(scratch("env.csv.meta.json")));
    CHECK(meta["settings"]["run.threads"] == "3");
    CHECK(slurp(scratch("env.csv")) == slurp(scratch("cli.csv")));
}

TEST_CASE("numerical failures map to exit code 3") {
    RunConfig c;
    c.mode = Mode::sweep;
    c.params = {1.0, 0.2, 0.7, 0.0};
    c.grid = {3.0, 3.0, 1};
    c.adaptive = true;
    c.k_levels = 10;
    c.rel_tol = 1e-14;
    c.n_start = 10;
    c.n_cap = 16;
    c.output_path = scratch("capped.csv").string();
    std::ostringstream log;
    CHECK(run(c, log) == exit_numerical);
    const auto meta = nlohmann::json::parse(slurp(scratch("capped.csv.meta.json")));
    CHECK(meta["numerical_ok"] == false);
    CHECK(meta["columns"][0]["converged"] == false);
}
