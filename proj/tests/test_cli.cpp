#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "support.hpp"

using namespace tdw;
using test::TempDir;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    static int invocation = 0;
    const fs::path out = fs::temp_directory_path() / ("tdw-cli-out-" + std::to_string(invocation));
    const fs::path err = fs::temp_directory_path() / ("tdw-cli-err-" + std::to_string(invocation));
    ++invocation;
    const std::string cmd = std::string(TDW_CLI_BIN) + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = csv::read_file(out);
    res.err = csv::read_file(err);
    fs::remove(out);
    fs::remove(err);
    return res;
}

bool same_file_bytes(const fs::path& a, const fs::path& b) {
    return csv::read_file(a) == csv::read_file(b);
}

std::string golden(const std::string& name) {
    return csv::read_file(fs::path(TDW_GOLDEN_DIR) / name);
}

}  // namespace

TEST_CASE("pipeline: simulate, segment, load, check; reruns are byte-identical") {
    TempDir dir("pipeline");
    const std::string sim1 = (dir.path / "sim1").string();
    const std::string sim2 = (dir.path / "sim2").string();
    const std::string base = "simulate --seed 3 --mics 2 --delegations 5 --pois-per-delegation 4 "
                             "--stops 3 --dwell 600 --event-rate 0.3 --out ";
    REQUIRE(run_cli(base + sim1).exit_code == 0);
    REQUIRE(run_cli(base + sim2).exit_code == 0);
    for (const char* name : {"fixes.csv", "gazetteer.csv", "admin.csv", "mics.csv",
                             "itinerary.csv", "events.csv", "ground_truth.csv"})
        REQUIRE(same_file_bytes(fs::path(sim1) / name, fs::path(sim2) / name));

    const std::string traj1 = (dir.path / "traj1").string();
    const std::string traj2 = (dir.path / "traj2").string();
    const std::string seg = "segment --fixes " + sim1 + "/fixes.csv --itinerary " + sim1 +
                            "/itinerary.csv --events " + sim1 + "/events.csv --gazetteer " +
                            sim1 + "/gazetteer.csv --eps 50 --tau 300 --out ";
    REQUIRE(run_cli(seg + traj1).exit_code == 0);
    REQUIRE(run_cli(seg + traj2).exit_code == 0);
    for (const char* name :
         {"trajectories.csv", "stops.csv", "moves.csv", "move_paths.csv", "sections.csv"})
        REQUIRE(same_file_bytes(fs::path(traj1) / name, fs::path(traj2) / name));

    const std::string wh1 = (dir.path / "wh1").string();
    const std::string wh2 = (dir.path / "wh2").string();
    const std::string load_cmd = "load --trajectories " + traj1 + " --gazetteer " + sim1 +
                                 "/gazetteer.csv --admin " + sim1 + "/admin.csv --mics " + sim1 +
                                 "/mics.csv --out ";
    REQUIRE(run_cli(load_cmd + wh1).exit_code == 0);
    REQUIRE(run_cli(load_cmd + wh2).exit_code == 0);
    for (const auto& name : warehouse_table_names())
        REQUIRE(same_file_bytes(fs::path(wh1) / (name + ".csv"), fs::path(wh2) / (name + ".csv")));
    REQUIRE(same_file_bytes(fs::path(wh1) / "manifest.txt", fs::path(wh2) / "manifest.txt"));

    const CliResult check = run_cli("check --warehouse " + wh1);
    CHECK(check.exit_code == 0);
    CHECK(check.out.find("0 violations") != std::string::npos);

    SECTION("a corrupted warehouse fails the check with a data exit code") {
        fs::remove(fs::path(wh2) / "dim_move.csv");
        const CliResult broken = run_cli("check --warehouse " + wh2);
        CHECK(broken.exit_code == 2);
    }
}

TEST_CASE("queries against the reference fixture reproduce the goldens") {
    TempDir dir("queries");
    const ObjectGraph g = test::make_analysis_graph();
    write_bundle(load(g.trajectories, g.mics, g.gazetteer, g.admin_places), dir.path / "wh");
    const std::string wh = " --warehouse " + (dir.path / "wh").string();

    const CliResult q1 = run_cli("query q1" + wh + " --trajectory 34 --country Tunisia --csv");
    CHECK(q1.exit_code == 0);
    CHECK(q1.out == golden("q1.csv"));

    const CliResult q2 = run_cli("query q2" + wh + " --country tunisia --delegation sousse");
    CHECK(q2.exit_code == 0);
    CHECK(q2.out == golden("q2.txt"));

    const CliResult q3 = run_cli("query q3" + wh + " --trajectory 20 --csv");
    CHECK(q3.exit_code == 0);
    CHECK(q3.out == golden("q3.csv"));

    const CliResult q4 = run_cli("query q4" + wh + " --csv");
    CHECK(q4.exit_code == 0);
    CHECK(q4.out == golden("q4.csv"));

    const CliResult q5 = run_cli("query q5" + wh +
                                 " --location Hammamet --category hotel --type 5stars --csv");
    CHECK(q5.exit_code == 0);
    CHECK(q5.out == golden("q5.csv"));

    const CliResult q6 = run_cli("query q6" + wh + " --threshold 10 --csv");
    CHECK(q6.exit_code == 0);
    CHECK(q6.out == golden("q6.csv"));

    const CliResult rollup = run_cli("rollup" + wh + " --by country,delegation "
                                     "--kind Industrial --csv");
    CHECK(rollup.exit_code == 0);
    CHECK(rollup.out == golden("rollup_industrial.csv"));

    SECTION("an unknown trajectory id warns and yields an empty result") {
        const CliResult res = run_cli("query q1" + wh + " --trajectory 999 --country Tunisia");
        CHECK(res.exit_code == 0);
        CHECK(res.err.find("warning") != std::string::npos);
    }

    SECTION("aligned-table rendering is the default") {
        const CliResult res = run_cli("query q4" + wh);
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("trajectory_id") != std::string::npos);
        CHECK(res.out.find("(2 rows)") != std::string::npos);
    }
}

TEST_CASE("usage errors exit with code 1") {
    TempDir dir("usage");
    const ObjectGraph g = test::make_analysis_graph();
    write_bundle(load(g.trajectories, g.mics, g.gazetteer, g.admin_places), dir.path / "wh");
    const std::string wh = " --warehouse " + (dir.path / "wh").string();

    CHECK(run_cli("query q6" + wh + " --threshold -1").exit_code == 1);
    CHECK(run_cli("query q9" + wh).exit_code == 1);
    CHECK(run_cli("query q1" + wh + " --country Tunisia").exit_code == 1);  // no --trajectory
    CHECK(run_cli("rollup" + wh + " --kind volcano").exit_code == 1);
    CHECK(run_cli("rollup" + wh + " --by continent --kind Sea").exit_code == 1);
    CHECK(run_cli("segment --eps 50").exit_code == 1);  // missing required flags
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("data errors exit with code 2") {
    CHECK(run_cli("check --warehouse /nonexistent/path").exit_code == 2);
    CHECK(run_cli("query q4 --warehouse /nonexistent/path").exit_code == 2);
    TempDir dir("baddata");
    csv::write_file(dir.path / "fixes.csv", "mic_id,t_utc_s,lat_deg,lon_deg\n");
    CHECK(run_cli("segment --fixes " + (dir.path / "fixes.csv").string() + " --out " +
                  (dir.path / "out").string())
              .exit_code == 2);
}

TEST_CASE("help is available and exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("simulate --help").exit_code == 0);
}
