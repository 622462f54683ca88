#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "curtainlab/scenario.hpp"

using namespace curtainlab;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "cli_test_stdout.txt";
    std::string cmd = std::string(CURTAINLAB_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream f(out_file);
    std::stringstream ss;
    ss << f.rdbuf();
    (void)std::remove(out_file.c_str());
#ifdef _WIN32
    return {status, ss.str()};
#else
    return {WEXITSTATUS(status), ss.str()};
#endif
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("dist subcommand prints the plane distance") {
    RunResult r = run_cli("dist --space plane --p 0,0 --q 3,4");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(5.0));
    RunResult t = run_cli("dist --space tripod --p 0:10 --q 1:10");
    CHECK(std::stod(t.out) == doctest::Approx(20.0));
}

TEST_CASE("dhat subcommand prints a lower/upper pair") {
    RunResult r = run_cli("dhat --space strip --p 0,0 --q 8,0 --lmax 16 --extent 12");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("lower") != std::string::npos);
    CHECK(r.out.find("upper") != std::string::npos);
}

TEST_CASE("missing scenario file exits 2") {
    RunResult r = run_cli("run missing.scn");
    CHECK(r.exit_code == 2);
}

TEST_CASE("invalid scenario reports the failing field and exits 2") {
    std::string path = "bad_scenario.scn";
    {
        std::ofstream f(path);
        f << "{\"space\": {\"kind\": \"plane\"}, \"seed\": 0}";
    }
    RunResult r = run_cli("run " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("experiment") != std::string::npos); // path-to-field diagnostic
    (void)std::remove(path.c_str());
}

TEST_CASE("tree delta scenario passes its check and is byte-deterministic") {
    std::string path = "tree_delta.scn";
    {
        std::ofstream f(path);
        f << R"({"space":{"kind":"tripod"},
                "experiment":{"name":"deltascan",
                              "params":{"metric":"ambient","windows":[10],
                                        "quadruples":2000,"check_max_delta":1e-9}},
                "seed":42,"out_dir":"cli_run_a"})";
    }
    RunResult a = run_cli("run " + path + " --check");
    CHECK(a.exit_code == 0);
    RunResult b = run_cli("run " + path + " --check --out-dir cli_run_b");
    CHECK(b.exit_code == 0);
    std::string csv_a = slurp("cli_run_a/deltascan/results.csv");
    std::string csv_b = slurp("cli_run_b/deltascan/results.csv");
    CHECK(!csv_a.empty());
    CHECK(csv_a == csv_b); // identical scenario + seed => byte-identical csv
    // rows carry seed, pool id and version columns
    CHECK(csv_a.find("seed") != std::string::npos);
    CHECK(csv_a.find("version") != std::string::npos);
    std::filesystem::remove_all("cli_run_a");
    std::filesystem::remove_all("cli_run_b");
    (void)std::remove(path.c_str());
}

TEST_CASE("different seeds may differ, equal seeds never do (in-process)") {
    std::string doc = R"({"space":{"kind":"plane"},
        "experiment":{"name":"deltascan",
                      "params":{"metric":"ambient","windows":[10],"quadruples":500}},
        "seed":7,"out_dir":"DIR"})";
    std::string d1 = doc, d2 = doc;
    d1.replace(d1.find("DIR"), 3, "cli_seed_a");
    d2.replace(d2.find("DIR"), 3, "cli_seed_b");
    CHECK(run_scenario_text(d1, {}, false).exit_code == 0);
    CHECK(run_scenario_text(d2, {}, false).exit_code == 0);
    std::string a = slurp("cli_seed_a/deltascan/results.csv");
    std::string b = slurp("cli_seed_b/deltascan/results.csv");
    CHECK(a == b);
    std::filesystem::remove_all("cli_seed_a");
    std::filesystem::remove_all("cli_seed_b");
}

TEST_CASE("check violations exit 3") {
    std::string path = "plane_delta.scn";
    {
        std::ofstream f(path);
        f << R"({"space":{"kind":"plane"},
                "experiment":{"name":"deltascan",
                              "params":{"metric":"ambient","windows":[10],
                                        "quadruples":300,"check_max_delta":0}},
                "seed":1,"out_dir":"cli_run_c"})";
    }
    RunResult r = run_cli("run " + path + " --check");
    CHECK(r.exit_code == 3);
    // without --check the same scenario succeeds
    RunResult ok = run_cli("run " + path);
    CHECK(ok.exit_code == 0);
    std::filesystem::remove_all("cli_run_c");
    (void)std::remove(path.c_str());
}

TEST_CASE("packaged scenarios parse and run") {
    std::string dir = CURTAINLAB_SCENARIO_DIR;
    RunResult r = run_cli("run " + dir + "/deltascan_tree.scn --check --out-dir cli_run_scn");
    CHECK(r.exit_code == 0);
    std::filesystem::remove_all("cli_run_scn");
}

TEST_CASE("CURTAINLAB_OUT overrides the scenario out_dir") {
    std::string path = "env_out.scn";
    {
        std::ofstream f(path);
        f << R"({"space":{"kind":"tripod"},
                "experiment":{"name":"deltascan",
                              "params":{"metric":"ambient","windows":[8],"quadruples":200}},
                "seed":3,"out_dir":"cli_env_ignored"})";
    }
    std::string cmd = std::string("CURTAINLAB_OUT=cli_env_used ") + CURTAINLAB_CLI_PATH +
                      " run " + path + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(std::filesystem::exists("cli_env_used/deltascan/results.csv"));
    CHECK(!std::filesystem::exists("cli_env_ignored"));
    std::filesystem::remove_all("cli_env_used");
    (void)std::remove(path.c_str());
}
