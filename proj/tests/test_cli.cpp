#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "optodistill/config.hpp"
#include "optodistill/table.hpp"

using namespace optodistill;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

fs::path fresh_dir() {
    std::random_device rd;
    return fs::temp_directory_path() /
           ("optodistill_cli_" + std::to_string(rd()) + std::to_string(rd()));
}

CliResult run_cli(const std::string& args) {
    const fs::path dir = fresh_dir();
    fs::create_directories(dir);
    const fs::path out = dir / "out.txt";
    const fs::path err = dir / "err.txt";
    const std::string cmd = std::string(OPTODISTILL_CLI_PATH) + " " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove_all(dir);
    return r;
}

fs::path write_config(const std::string& text) {
    const fs::path dir = fresh_dir();
    fs::create_directories(dir);
    const fs::path p = dir / "run.cfg";
    std::ofstream os(p);
    os << text;
    return p;
}

nlohmann::json error_record(const CliResult& r) {
    CAPTURE(r.err);
    return nlohmann::json::parse(r.err);
}

}  // namespace

TEST_CASE("version and help exit cleanly") {
    const CliResult v = run_cli("--version");
    CHECK(v.code == 0);
    CHECK(v.out.find("optodistill 0.1.0") != std::string::npos);

    const CliResult h = run_cli("--help");
    CHECK(h.code == 0);
    CHECK(h.out.find("--config") != std::string::npos);
    CHECK(h.out.find("fig2a") != std::string::npos);
}

TEST_CASE("show-config echoes the resolved preset") {
    const CliResult r = run_cli("fig2a --show-config");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("kind = ratio-scan") != std::string::npos);
    RunConfig parsed;
    apply_config_text(parsed, r.out);
    CHECK(config_to_string(parsed) == config_to_string(preset_config("fig2a")));

    const CliResult d = run_cli("run --show-config");
    REQUIRE(d.code == 0);
    CHECK(d.out.find("kind = pdf-scan") != std::string::npos);
}

TEST_CASE("command-line overrides land in the resolved config") {
    const CliResult r = run_cli("fig2a --show-config --n-max 9");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("n_max = 9") != std::string::npos);

    const fs::path cfg = write_config("[grid]\nq = 2\n");
    const CliResult l = run_cli("fig2c --show-config --config '" + cfg.string() + "'");
    REQUIRE(l.code == 0);
    CHECK(l.out.find("q = 2\n") != std::string::npos);
    fs::remove_all(cfg.parent_path());
}

TEST_CASE("usage errors exit 2 with a json record on stderr") {
    const CliResult missing = run_cli("");
    CHECK(missing.code == 2);
    nlohmann::json rec = error_record(missing);
    CHECK(rec["error"] == "ConfigError");
    CHECK(rec["exit_code"] == 2);

    const CliResult preset = run_cli("fig9");
    CHECK(preset.code == 2);
    rec = error_record(preset);
    CHECK(rec["error"] == "ConfigError");
    CHECK(rec["message"].get<std::string>().find("fig9") != std::string::npos);
}

TEST_CASE("invalid parameter values exit 2") {
    const fs::path cfg = write_config("[params]\nlambda = 2\n");
    const CliResult r = run_cli("fig2a --show-config --config '" + cfg.string() + "'");
    CHECK(r.code == 2);
    CHECK(error_record(r)["error"] == "ConfigError");
    fs::remove_all(cfg.parent_path());
}

TEST_CASE("missing config file exits 3 as an io error") {
    const CliResult r = run_cli("run --config /nonexistent_zz/run.cfg");
    CHECK(r.code == 3);
    const nlohmann::json rec = error_record(r);
    CHECK(rec["error"] == "IoError");
    CHECK(rec["exit_code"] == 3);
}

TEST_CASE("a run writes the advertised files") {
    const fs::path cfg = write_config(
        "[experiment]\nkind = pdf-scan\nname = smoke\n"
        "[grid]\nq_min = -1\nq_max = 3\nq_count = 9\n");
    const fs::path out_dir = fresh_dir();
    const CliResult r = run_cli("run --config '" + cfg.string() + "' --out '" +
                                out_dir.string() + "' --svg");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("rows: 9") != std::string::npos);
    CHECK(r.out.find("wrote ") != std::string::npos);
    CHECK(fs::exists(out_dir / "smoke.csv"));
    CHECK(fs::exists(out_dir / "smoke.config.echo"));
    CHECK(fs::exists(out_dir / "smoke.svg"));
    const ResultTable t = read_csv_file((out_dir / "smoke.csv").string());
    CHECK(t.rows.size() == 9);
    fs::remove_all(cfg.parent_path());
    fs::remove_all(out_dir);
}

TEST_CASE("compute failures exit 3 and leave no output behind") {
    const fs::path cfg = write_config(
        "[experiment]\nkind = ratio-scan\n"
        "[params]\nlambda = 0\n"
        "[grid]\nq_min = 0\nq_max = 1\nq_count = 2\n");
    const fs::path out_dir = fresh_dir();
    const CliResult r = run_cli("run --config '" + cfg.string() + "' --out '" +
                                out_dir.string() + "'");
    CHECK(r.code == 3);
    const nlohmann::json rec = error_record(r);
    CHECK(rec["error"] == "ZeroBaseline");
    CHECK(rec["message"].get<std::string>().find("ratio-scan") != std::string::npos);
    CHECK_FALSE(fs::exists(out_dir));
    fs::remove_all(cfg.parent_path());
}
