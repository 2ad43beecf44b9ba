#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/cli.hpp"
#include "liouville/config.hpp"
#include "liouville/rational.hpp"

using namespace liouville;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("config text parses keys, comments and blank lines") {
    ExperimentConfig c = ExperimentConfig::parse(
        "# leading comment\n"
        "grid = 64\n"
        "\n"
        "tol = 1e-10\n"
        "tau = 1\n"
        "tau = 3\n");
    CHECK(c.has("grid"));
    CHECK(c.get_long("grid") == 64);
    CHECK(c.get_double("tol") == 1e-10);
    CHECK(c.count("tau") == 2);
    const std::vector<long> taus = c.get_long_list("tau");
    REQUIRE(taus.size() == 2);
    CHECK(taus[0] == 1);
    CHECK(taus[1] == 3);
}

TEST_CASE("parse-serialize round trip is the identity") {
    const std::string text =
        "grid = 64\n"
        "tol = 0.125\n"
        "tau = 1\n"
        "tau = 3\n"
        "scheme = upwind\n";
    ExperimentConfig c = ExperimentConfig::parse(text);
    CHECK(c.serialize() == text);
    ExperimentConfig c2 = ExperimentConfig::parse(c.serialize());
    CHECK(c2.serialize() == text);
}

TEST_CASE("malformed config lines carry line numbers") {
    CHECK_THROWS_AS(ExperimentConfig::parse("grid 64\n"), UsageError);
    CHECK_THROWS_AS(ExperimentConfig::parse("bad key! = 1\n"), UsageError);
    try {
        ExperimentConfig::parse("a = 1\nnonsense\n");
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("decimal values parse exactly, repeated scalars are rejected") {
    ExperimentConfig c = ExperimentConfig::parse("x = 0.1\ny = 2\ny = 3\n");
    CHECK(c.get_double("x") == 0.1);  // nearest double to exactly 1/10
    CHECK_THROWS_AS(c.get_double("y"), UsageError);   // repeated key, scalar read
    CHECK_THROWS_AS(c.get_double("zz"), UsageError);  // missing
}

TEST_CASE("consumption tracking flags untouched keys") {
    ExperimentConfig c = ExperimentConfig::parse("a = 1\nb = 2\n");
    CHECK(c.get_long("a") == 1);
    const std::vector<std::string> left = c.unconsumed_keys();
    REQUIRE(left.size() == 1);
    CHECK(left[0] == "b");
    c.touch("b");
    CHECK(c.unconsumed_keys().empty());
}

TEST_CASE("boolean spellings") {
    ExperimentConfig c = ExperimentConfig::parse(
        "a = true\nb = off\nc = 1\nd = No\ne = maybe\n");
    CHECK(c.get_bool("a"));
    CHECK(!c.get_bool("b"));
    CHECK(c.get_bool("c"));
    CHECK(!c.get_bool("d"));
    CHECK_THROWS_AS(c.get_bool("e"), UsageError);
}

TEST_CASE("exit code 0 on passing verification") {
    CHECK(run_cli({"verify", "sigma-approx", "--n", "1", "--window", "2"}) == 0);
    CHECK(run_cli({"verify", "intn", "--n", "1", "--samples-per-cell", "2"}) == 0);
    CHECK(run_cli({"verify", "integral-lower-bound", "--xmax", "100"}) == 0);
}

TEST_CASE("exit code 1 on an honest inequality violation") {
    // the triangle wave has true periods at the integers, so the largest
    // gap over any scanned range is about 1; claiming a gap bound of 0.1
    // must fail with the violation exit code
    CHECK(run_cli({"ap", "scan", "--target", "z", "--eps", "0.05", "--tau-lo", "0",
                   "--tau-hi", "6", "--tau-step", "0.25", "--window-lo", "-20",
                   "--window-hi", "20", "--sample-step", "0.25", "--gap-bound",
                   "0.1"}) == 1);
}

TEST_CASE("exit code 2 on usage errors") {
    CHECK(run_cli({"no-such-command"}) == 2);
    CHECK(run_cli({"verify", "sigma-approx", "--bogus-flag", "7"}) == 2);
    CHECK(run_cli({"ap", "scan", "--target", "nonsense", "--eps", "0.1"}) == 2);
    CHECK(run_cli({"eigen", "--preset", "unknown-preset"}) == 2);
    CHECK(run_cli({"eigen", "--preset", "laplacian", "--c-term", "const:-1"}) == 2);
    CHECK(run_cli({}) == 2);
}

TEST_CASE("exit code 3 when relaxation cannot converge") {
    // no zero-order term and mean-one forcing: the mean grows linearly, so
    // the stationary relaxation must time out
    CHECK(run_cli({"entire", "relax", "--preset", "laplacian", "--grid", "16",
                   "--tol", "1e-9", "--t-max", "25", "--fit-lo", "5", "--fit-hi",
                   "20"}) == 3);
}

TEST_CASE("help is a success, not an error") {
    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({"eigen", "--help"}) == 0);
    CHECK(run_cli({"entire", "truncate", "--help"}) == 0);
}

TEST_CASE("config values merge under explicit flags") {
    TempFile cfg("cli_cfg_merge.cfg");
    write_file(cfg.path, "n = 1\nwindow = 3\n");
    CHECK(run_cli({"verify", "sigma-approx", "--config", cfg.path}) == 0);
    // explicit flag wins over the config value
    CHECK(run_cli({"verify", "sigma-approx", "--config", cfg.path, "--window",
                   "2"}) == 0);
}

TEST_CASE("unknown config keys are rejected") {
    TempFile cfg("cli_cfg_unknown.cfg");
    write_file(cfg.path, "n = 1\nwindow = 2\nwibble = 9\n");
    CHECK(run_cli({"verify", "sigma-approx", "--config", cfg.path}) == 2);
    CHECK(run_cli({"verify", "sigma-approx", "--config", "no_such_file.cfg"}) == 2);
}

TEST_CASE("identical runs emit identical bytes without the timestamp") {
    TempFile j1("cli_eig_1.json"), j2("cli_eig_2.json");
    TempFile c1("cli_eig_1.csv"), c2("cli_eig_2.csv");
    const std::vector<std::string> base = {"eigen", "--preset",   "laplacian",
                                           "--grid", "16",        "--tol",
                                           "1e-9",  "--no-timestamp"};
    auto with_out = [&](const std::string& j, const std::string& c) {
        std::vector<std::string> args = base;
        args.insert(args.end(), {"--out-json", j, "--out-csv", c});
        return args;
    };
    CHECK(run_cli(with_out(j1.path, c1.path)) == 0);
    CHECK(run_cli(with_out(j2.path, c2.path)) == 0);
    const std::string a = slurp(j1.path), b = slurp(j2.path);
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(slurp(c1.path) == slurp(c2.path));
    CHECK(a.find("timestamp") == std::string::npos);

    // with the timestamp enabled the field appears
    TempFile j3("cli_eig_3.json");
    std::vector<std::string> stamped = {"eigen",  "--preset", "laplacian",
                                        "--grid", "16",       "--tol",
                                        "1e-9",   "--out-json", j3.path};
    CHECK(run_cli(stamped) == 0);
    CHECK(slurp(j3.path).find("timestamp") != std::string::npos);
}

TEST_CASE("eigen CSV carries the node profile with full precision") {
    TempFile csv("cli_eig_profile.csv");
    CHECK(run_cli({"eigen", "--preset", "laplacian", "--grid", "16", "--tol", "1e-9",
                   "--out-csv", csv.path, "--no-timestamp"}) == 0);
    const std::string text = slurp(csv.path);
    CHECK(text.rfind("node,x,phi\n", 0) == 0);
    // 16 data rows plus header
    int lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 17);
    CHECK(text.find("0.0625") != std::string::npos);  // x of node 1
}

TEST_CASE("the default eigen action is the solve") {
    TempFile j("cli_eig_default.json");
    CHECK(run_cli({"eigen", "--preset", "laplacian", "--grid", "16", "--tol", "1e-9",
                   "--out-json", j.path, "--no-timestamp"}) == 0);
    const std::string text = slurp(j.path);
    CHECK(text.find("\"lambda_p\"") != std::string::npos);
    CHECK(text.find("\"experiment\": \"eigen solve\"") != std::string::npos);
}

TEST_CASE("witness subcommand runs with the default shift list") {
    CHECK(run_cli({"ap", "witness", "--tau", "1", "--tau", "3", "--tol", "1e-8"}) ==
          0);
}
