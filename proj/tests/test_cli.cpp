#include "pnet/cli.hpp"
#include "pnet/json_io.hpp"
#include "pnet/planner.hpp"
#include "pnet/scenario.hpp"

#include "support/dot_parser.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pnet;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return test::fixture_path(name).string(); }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pnet-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("validate accepts clean fixtures") {
    CliResult r = run({"validate", fixture("triangle.json")});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "OK\n");
}

TEST_CASE("validate rejects missing files with a diagnostic") {
    CliResult r = run({"validate", "no-such-file.json"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no-such-file.json") != std::string::npos);
}

TEST_CASE("unknown flags exit 2 with usage text") {
    CliResult r = run({"plan", fixture("triangle.json"), "--frobnicate"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--frobnicate") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("unknown subcommands exit 2") {
    CliResult r = run({"frobnicate"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("plan emits exactly the planner's path") {
    TempDir tmp;
    std::string out_file = tmp.file("path.json");
    CliResult r = run({"plan", fixture("triangle.json"), "--out", out_file});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("cost") != std::string::npos);

    Scenario s = load_scenario(test::fixture_path("triangle.json"));
    PlanResult direct = plan(s.network, s.ruleset, s.attacker.start, s.attacker.goal,
                             s.attacker.weights, {});
    CHECK(slurp(out_file) == dump_json(plan_result_to_json(direct)));
}

TEST_CASE("enumerate lists the goal paths") {
    CliResult r = run({"enumerate", fixture("shorter_longer.json"), "--max-depth", "3"});
    CHECK(r.exit_code == 0);
    Json arr = Json::parse(r.out);
    CHECK(arr.size() == 2);
}

TEST_CASE("compare of a path with itself reports 1.0") {
    TempDir tmp;
    std::string path_file = tmp.file("p.json");
    CHECK(run({"plan", fixture("triangle.json"), "--out", path_file}).exit_code == 0);
    CliResult r = run({"compare", path_file, path_file});
    CHECK(r.exit_code == 0);
    Json report = Json::parse(r.out);
    CHECK(report.at("overall").get<double>() == 1.0);
    CHECK(report.at("prefiltered").get<bool>() == false);
}

TEST_CASE("compare resolves techniques through a scenario") {
    TempDir tmp;
    // same route, different rules that share a technique label
    AttackPath p1{"A", {{"A", "L1", "B", "R1"}}};
    AttackPath p2{"A", {{"A", "L1", "B", "R3"}}};
    std::string f1 = tmp.file("p1.json");
    std::string f2 = tmp.file("p2.json");
    std::ofstream(f1) << dump_json(path_to_json(p1));
    std::ofstream(f2) << dump_json(path_to_json(p2));

    CliResult no_rules = run({"compare", f1, f2});
    CHECK(Json::parse(no_rules.out).at("technique_sim").get<double>() == 0.0);

    CliResult with_rules =
        run({"compare", f1, f2, "--scenario", fixture("triangle.json")});
    CHECK(Json::parse(with_rules.out).at("technique_sim").get<double>() == 1.0);
}

TEST_CASE("eval-offense with the perfect clone scores 1.0") {
    CliResult r =
        run({"eval-offense", fixture("triangle.json"), "--sut", "weighted:1,1,1"});
    CHECK(r.exit_code == 0);
    Json report = Json::parse(r.out);
    CHECK(report.at("similarity").at("overall").get<double>() == 1.0);
    CHECK(report.at("sut_violations").empty());
}

TEST_CASE("eval-offense accepts all built-in SUT kinds") {
    for (const char* sut : {"greedy", "random:7", "weighted:1,0,0"}) {
        CAPTURE(sut);
        CliResult r = run({"eval-offense", fixture("triangle.json"), "--sut", sut});
        CHECK(r.exit_code == 0);
    }
    CliResult bad = run({"eval-offense", fixture("triangle.json"), "--sut", "psychic"});
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("psychic") != std::string::npos);
}

TEST_CASE("eval-defense reports the expected verdicts") {
    CliResult noop = run({"eval-defense", fixture("triangle.json"), "--defender", "noop"});
    CHECK(noop.exit_code == 0);
    Json report = Json::parse(noop.out);
    CHECK(report.at("goal_reached").get<bool>());
    CHECK(report.at("iterations_run").get<int>() == 2);

    CliResult threshold = run({"eval-defense", fixture("triangle.json"), "--defender",
                               "threshold:1", "--updates", "every-iteration"});
    Json threport = Json::parse(threshold.out);
    CHECK_FALSE(threport.at("goal_reached").get<bool>());
    CHECK(threport.at("steps_blocked").get<int>() == 1);
}

TEST_CASE("eval-defense drives a scripted defender from a file") {
    TempDir tmp;
    std::string script = tmp.file("actions.json");
    std::ofstream(script) << R"([{"kind": "disable_link", "link": "L1", "time_cost": 1.0}])";
    CliResult r = run({"eval-defense", fixture("triangle.json"), "--defender",
                       "scripted:" + script});
    CHECK(r.exit_code == 0);
    Json report = Json::parse(r.out);
    CHECK_FALSE(report.at("goal_reached").get<bool>());
    CHECK(report.at("score").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("degrade writes a loadable degraded scenario plus its log") {
    TempDir tmp;
    std::string out_file = tmp.file("degraded.json");
    std::string log_file = tmp.file("log.json");
    CliResult r = run({"degrade", fixture("triangle.json"), "--seed", "7", "--hide-links", "1.0",
                       "--out", out_file, "--log", log_file});
    CHECK(r.exit_code == 0);
    Scenario degraded = load_scenario(out_file);
    CHECK(degraded.network.links.empty());
    DegradationLog log = degradation_log_from_json(Json::parse(slurp(log_file)), "log");
    CHECK(log.hidden_links.size() == 3);
}

TEST_CASE("PNET_SEED fills in unset degradation seeds") {
    TempDir tmp;
    std::string with_env = tmp.file("a.json");
    std::string with_flag = tmp.file("b.json");

    ::setenv("PNET_SEED", "4242", 1);
    CHECK(run({"degrade", fixture("triangle.json"), "--perturb", "0.8", "--out", with_env})
              .exit_code == 0);
    ::unsetenv("PNET_SEED");
    CHECK(run({"degrade", fixture("triangle.json"), "--perturb", "0.8", "--seed", "4242",
               "--out", with_flag})
              .exit_code == 0);
    CHECK(slurp(with_env) == slurp(with_flag));
}

TEST_CASE("export-dot renders the scenario with an optional overlay") {
    TempDir tmp;
    std::string path_file = tmp.file("path.json");
    std::string dot_file = tmp.file("net.dot");
    CHECK(run({"plan", fixture("triangle.json"), "--out", path_file}).exit_code == 0);
    CliResult r = run({"export-dot", fixture("triangle.json"), "--paths", path_file, "--out",
                       dot_file});
    CHECK(r.exit_code == 0);
    test::DotGraph g = test::DotParser(slurp(dot_file)).parse();
    CHECK(g.nodes.at("B").count("fillcolor") == 1);
}

TEST_CASE("every command is byte-deterministic across runs") {
    TempDir tmp;
    // identical argv twice, including the output path: bytes must match
    auto rerun = [&](std::vector<std::string> args, const std::string& out_name) {
        std::string out_file = tmp.file(out_name);
        for (auto& a : args) {
            if (a == "OUT") a = out_file;
        }
        CliResult r1 = run(args);
        std::string bytes1 = slurp(out_file);
        CliResult r2 = run(args);
        CHECK(r1.exit_code == r2.exit_code);
        CHECK(r1.out == r2.out);
        CHECK(bytes1 == slurp(out_file));
    };

    rerun({"plan", fixture("triangle.json"), "--out", "OUT"}, "plan.json");
    rerun({"degrade", fixture("triangle.json"), "--seed", "3", "--hide-links", "0.5",
           "--perturb", "0.5", "--spurious", "1.0", "--out", "OUT"},
          "degraded.json");
    rerun({"export-dot", fixture("triangle.json"), "--out", "OUT"}, "net.dot");
}

TEST_SUITE_END();
