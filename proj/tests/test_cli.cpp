#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "nehari/config.hpp"
#include "nehari/io.hpp"

using namespace nehari;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / "nehari_cli_test" / name;
    fs::create_directories(p.parent_path());
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run_cli(const std::string& args) {
    const std::string cmd = std::string(NEHARI_CLI) + " " + args + " 2>&1";
    Outcome o;
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), f)) o.out += buf.data();
    const int st = pclose(f);
    o.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return o;
}

const char* kToml = R"(
[law]
kind = "power_sum"
low = 2.0
high = 2.5

[domain]
s = 0.3
n = 17
L = 2.5

[potential.V]
kind = "constant"
value = 2.0

[problem]
q = 3.0
p = 4.0
lambda = [0.5, 1.0]
mu = 7.5

[run]
seed = 11
branch = "minus"
)";

}

TEST_CASE("TOML config decoding") {
    const auto c = parse_toml_config(kToml);
    CHECK(c.law.kind == "power_sum");
    CHECK(c.law.low == 2.0);
    CHECK(c.law.high == 2.5);
    CHECK(c.s == 0.3);
    CHECK(c.n == 17);
    CHECK(c.L == 2.5);
    CHECK(c.V.kind == PotentialKind::Constant);
    CHECK(c.V.value == 2.0);
    CHECK(c.a.kind == PotentialKind::Gaussian);   // default kept
    CHECK(c.lambdas == std::vector<double>{0.5, 1.0});
    CHECK(c.mus == std::vector<double>{7.5});
    CHECK(c.seed == 11);
    CHECK(c.branch == "minus");
    CHECK(c.restarts == 4);
}

TEST_CASE("config errors carry a location") {
    try {
        parse_toml_config("[domain]\ns = 0.4\nn = [1,\n");
        FAIL("expected a parse error");
    } catch (const ConfigParseError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
    try {
        parse_toml_config("[domain]\ns = 0.4\n\nn = \"many\"\n");
        FAIL("expected a type error");
    } catch (const ConfigParseError& e) {
        const std::string w = e.what();
        CHECK(w.find("domain.n") != std::string::npos);
        CHECK(w.find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_toml_config("[run]\nbranch = \"sideways\"\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_toml_config("[law]\nkind = \"cubic\"\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_toml_config("[run]\nrestarts = 2\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_json_config("{\"domain\": {\"N\": 3}}"), ConfigParseError);
    CHECK_THROWS_AS(parse_json_config("{oops"), ConfigParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigParseError);
}

TEST_CASE("config round trip through JSON") {
    const auto c = parse_toml_config(kToml);
    CHECK(parse_json_config(to_json(c).dump()) == c);
    CHECK(parse_json_config(to_json(RunConfig{}).dump()) == RunConfig{});
    const auto file = scratch("round.json");
    write_file(file, to_json(c).dump(2));
    CHECK(load_config(file.string()) == c);
}

TEST_CASE("CSV format") {
    CsvTable t;
    t.comment("note");
    t.column("x", "abscissa");
    t.column("y", "ordinate");
    t.row(std::vector<double>{0.1, 2.0});
    CHECK(t.str() == "# note\n# x: abscissa\n# y: ordinate\nx,y\n0.10000000000000001,2\n");
    CHECK_THROWS_AS(t.row(std::vector<double>{1.0}), NonPositiveInput);
    CHECK(std::stod(fmt17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("cli check passes on the acceptance config") {
    const auto out = scratch("check_ok");
    const auto r = run_cli("check -c " + std::string(NEHARI_CONFIGS) + "/acceptance.toml -o " + out.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS H1_order") != std::string::npos);
    REQUIRE(fs::exists(out / "manifest.json"));
    const auto m = nlohmann::json::parse(read_file(out / "manifest.json"));
    CHECK(m["command"] == "check");
    CHECK(m["flags"].empty());
    // the echoed config decodes back to the input
    CHECK(parse_json_config(m["config"].dump()) == [&] {
        auto c = load_config(std::string(NEHARI_CONFIGS) + "/acceptance.toml");
        c.output = out.string();
        return c;
    }());
}

TEST_CASE("cli flags a failed hypothesis with exit code 2") {
    const auto cfg = scratch("bad_order.toml");
    write_file(cfg, "[problem]\nq = 4.0\np = 3.0\n");
    const auto r = run_cli("check -c " + cfg.string() + " -o " + scratch("check_bad").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("m < q < p") != std::string::npos);
    // solving commands refuse the problem outright
    CHECK(run_cli("extremal -c " + cfg.string() + " -o " + scratch("ext_bad").string()).code == 1);
}

TEST_CASE("cli errors exit with code 1") {
    const auto cfg = scratch("malformed.toml");
    write_file(cfg, "[domain\nn = 3\n");
    const auto r = run_cli("check -c " + cfg.string() + " -o " + scratch("malformed").string());
    CHECK(r.code == 1);
    CHECK(r.out.find("line") != std::string::npos);
    CHECK(run_cli("frobnicate").code == 1);
    CHECK(run_cli("check --law cubic:3 -o " + scratch("badlaw").string()).code == 1);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("cli nonexist and fibering on a small grid") {
    const auto out = scratch("nonexist");
    const auto r = run_cli("nonexist --grid-n 17 --samples 50 -o " + out.string());
    CHECK(r.code == 0);
    REQUIRE(fs::exists(out / "nonexist.csv"));
    const auto csv = read_file(out / "nonexist.csv");
    CHECK(csv.find("sampled certificate, not a proof") != std::string::npos);
    const auto j = nlohmann::json::parse(read_file(out / "nonexist.json"));
    CHECK(j["positive"] == true);

    const auto fo = scratch("fibering");
    CHECK(run_cli("fibering --grid-n 17 --mu 3 -o " + fo.string()).code == 0);
    CHECK(fs::exists(fo / "fibering.csv"));
    CHECK(fs::exists(fo / "fibering.gp"));

    const auto co = scratch("continue");
    const auto rc = run_cli("continue --grid-n 17 --steps 3 -o " + co.string());
    CHECK((rc.code == 0 || rc.code == 2));
    CHECK(read_file(co / "continuation.csv").find("k,mu,E_minus") != std::string::npos);
}
