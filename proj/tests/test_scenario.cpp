#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/errors.hpp"
#include "fraclab/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

// Small but complete scenario: every artifact is produced in well under a
// second so the whole pipeline can be exercised repeatedly.
RunConfig tiny_config() {
    return parse_config(
        "[domain]\n"
        "nx = 48\n"
        "[solver]\n"
        "delta = 1e-3\n"
        "mu = 1e-3\n"
        "dt_max = 1e-3\n"
        "t_end = 0.02\n"
        "[probes]\n"
        "snapshot_dt = 0.005\n"
        "inequality_probes = 10\n"
        "cutoffs = 4, 16\n");
}

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("fraclab_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string str() const { return path.string(); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool dirs_identical(const fs::path& a, const fs::path& b) {
    std::vector<std::string> names_a, names_b;
    for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename());
    for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename());
    std::sort(names_a.begin(), names_a.end());
    std::sort(names_b.begin(), names_b.end());
    if (names_a != names_b) return false;
    for (const std::string& n : names_a)
        if (slurp(a / n) != slurp(b / n)) return false;
    return true;
}

} // namespace

TEST_CASE("a tiny scenario produces the full artifact set and passes") {
    const TempDir tmp("scenario");
    const RunSummary sum = run_scenario(tiny_config(), tmp.str());

    CHECK(sum.all_pass());
    for (const Assertion& a : sum.assertions) {
        INFO(a.name << " measured=" << a.measured << " bound=" << a.bound);
        CHECK(a.pass);
        CHECK(a.measured <= a.bound);
    }
    CHECK(sum.assertions.size() == 8);
    CHECK(sum.inequalities.all_pass());
    CHECK(sum.final_record.mass < sum.initial_record.mass);
    CHECK(sum.final_record.t == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(sum.wall_seconds > 0.0);

    for (const char* name :
         {"diagnostics.csv", "eigenvalues.csv", "inequalities.json", "decay.csv",
          "residuals.csv", "initial_trace.csv", "cutoffs.csv", "summary.json",
          "snapshot_0000.csv"}) {
        INFO(name);
        CHECK(fs::exists(tmp.path / name));
    }
    CHECK(!fs::exists(tmp.path / "FAILED"));

    const nlohmann::json summary = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
    CHECK(summary.at("grid").at("cells").get<int>() == 48);
    CHECK(summary.at("assertions").size() == 8);
    CHECK(summary.at("decay").at("taus").size() == 4);
    CHECK(summary.at("snapshots").is_array());
    // The wall clock must never enter the artifacts.
    CHECK(slurp(tmp.path / "summary.json").find("wall") == std::string::npos);
}

TEST_CASE("identical configurations produce byte-identical artifacts") {
    const TempDir tmp("determinism");
    (void)run_scenario(tiny_config(), tmp.sub("a"));
    (void)run_scenario(tiny_config(), tmp.sub("b"));
    CHECK(dirs_identical(tmp.path / "a", tmp.path / "b"));
}

TEST_CASE("a failing scenario leaves a FAILED marker and rethrows") {
    const TempDir tmp("failure");
    RunConfig bad = tiny_config();
    bad.taus = {1.0, 0.5, 0.25, 6.0}; // collides: offset beyond half extent
    CHECK_THROWS_AS((void)run_scenario(bad, tmp.str()), ConfigError);
    REQUIRE(fs::exists(tmp.path / "FAILED"));
    CHECK(!slurp(tmp.path / "FAILED").empty());
}

TEST_CASE("comparing a run with itself yields zero differences") {
    const TempDir tmp("selfcompare");
    (void)run_scenario(tiny_config(), tmp.sub("a"));
    (void)run_scenario(tiny_config(), tmp.sub("b"));
    const ComparisonTable table = compare_runs({tmp.sub("a"), tmp.sub("b")});
    REQUIRE(table.pairs.size() == 1);
    CHECK(table.pairs[0].l2_space_time == 0.0);
    CHECK(table.pairs[0].final_mass_delta == 0.0);
    CHECK(table.pairs[0].final_linf_delta == 0.0);
}

TEST_CASE("comparing runs on different grids is refused by name") {
    const TempDir tmp("mismatch");
    (void)run_scenario(tiny_config(), tmp.sub("a"));
    RunConfig other = tiny_config();
    other.nx = 40;
    (void)run_scenario(other, tmp.sub("b"));
    try {
        (void)compare_runs({tmp.sub("a"), tmp.sub("b")});
        FAIL("expected ComparisonError");
    } catch (const ComparisonError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("domain.nx") != std::string::npos);
        CHECK(msg.find("40") != std::string::npos);
        CHECK(msg.find("48") != std::string::npos);
    }
}

TEST_CASE("a short continuation run orders its levels and reports") {
    const TempDir tmp("continuation");
    const ContinuationResult res = run_continuation(
        tiny_config(), {1e-2, 1e-3}, {1e-2, 1e-3}, tmp.str());

    CHECK(res.all_pass());
    REQUIRE(res.summaries.size() == 2);
    CHECK(res.table.consecutive_l2_decreasing);
    CHECK(res.table.mass_drift_decreasing);
    REQUIRE(res.table.deltas.size() == 2);
    CHECK(res.table.deltas[0] > res.table.deltas[1]); // strongest first
    CHECK(fs::exists(tmp.path / "continuation_report.json"));
    CHECK(fs::exists(tmp.path / "run_00" / "summary.json"));
    CHECK(fs::exists(tmp.path / "run_01" / "summary.json"));

    const nlohmann::json rep =
        nlohmann::json::parse(slurp(tmp.path / "continuation_report.json"));
    CHECK(rep.at("all_pass").get<bool>());
    CHECK(rep.at("runs").size() == 2);
}

TEST_CASE("continuation rejects mismatched or empty level lists") {
    const TempDir tmp("badlevels");
    CHECK_THROWS_AS(
        (void)run_continuation(tiny_config(), {1e-2}, {1e-2, 1e-3}, tmp.str()),
        ConfigError);
    CHECK_THROWS_AS((void)run_continuation(tiny_config(), {}, {}, tmp.str()),
                    ConfigError);
    CHECK_THROWS_AS(
        (void)run_continuation(tiny_config(), {1e-2, 2.0}, {1e-2, 1e-3}, tmp.str()),
        ConfigError);
}
