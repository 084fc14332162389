#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/config.hpp"
#include "fraclab/errors.hpp"

#include <string>

using namespace fraclab;

namespace {

std::string message_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("empty text yields the documented defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.dim == 1);
    CHECK(c.nx == 128);
    CHECK(c.extent_x == 1.0);
    CHECK(c.coefficient_family == "constant");
    CHECK(c.s == 0.5);
    CHECK(c.delta == 1e-3);
    CHECK(c.taus == std::vector<double>{1.0, 0.5, 0.25, 0.125});
    CHECK(c.cutoffs == std::vector<int>{4, 16, 64});
    CHECK(c.output_dir.empty());
}

TEST_CASE("every section parses, with comments and stray whitespace") {
    const RunConfig c = parse_config(
        "# a full scenario\n"
        "[domain]\n"
        "dim = 2\n"
        "extent_x = 2.0\n"
        "extent_y = 1.5   # wide box\n"
        "nx = 20\n"
        "ny = 10\n"
        "\n"
        "[coefficient]\n"
        "family = rotated\n"
        "theta = 0.3\n"
        "eig1 = 2.5\n"
        "eig2 = 0.5\n"
        "[fractional]\n"
        "s = 0.75\n"
        "[solver]\n"
        "delta = 1e-4\n"
        "mu = 2e-4\n"
        "dt_max = 5e-4\n"
        "t_end = 0.05\n"
        "[initial]\n"
        "family = bump\n"
        "center_x = 1.0\n"
        "center_y = 0.75\n"
        "radius = 0.3\n"
        "amplitude = 1.5\n"
        "[probes]\n"
        "epsilon = 0.2\n"
        "taus = 1, 0.5, 0.1\n"
        "cutoffs = 2, 8, 32\n"
        "snapshot_dt = 0.01\n"
        "inequality_probes = 12\n"
        "seed = 99\n"
        "[output]\n"
        "dir = /tmp/somewhere\n");
    CHECK(c.dim == 2);
    CHECK(c.extent_y == 1.5);
    CHECK(c.ny == 10);
    CHECK(c.coefficient_family == "rotated");
    CHECK(c.coefficient_eig2 == 0.5);
    CHECK(c.s == 0.75);
    CHECK(c.mu == 2e-4);
    CHECK(c.initial_family == "bump");
    CHECK(c.center_y == 0.75);
    CHECK(c.taus == std::vector<double>{1.0, 0.5, 0.1});
    CHECK(c.cutoffs == std::vector<int>{2, 8, 32});
    CHECK(c.probe_seed == 99);
    CHECK(c.output_dir == "/tmp/somewhere");

    const Grid g = c.make_grid();
    CHECK(g.dim == 2);
    CHECK(g.n[0] == 20);
    CHECK(g.cells == 200);
    CHECK(c.make_solver_params().mu == 2e-4);
    CHECK(c.make_coefficient().family == CoefficientFamily::RotatedAnisotropy);
    CHECK(c.make_initial().family == InitialFamily::Bump);
}

TEST_CASE("a misspelled key names its nearest neighbour") {
    const std::string msg = message_of("[solver]\ndetla = 1e-3\n");
    CHECK(msg.find("detla") != std::string::npos);
    CHECK(msg.find("did you mean 'delta'?") != std::string::npos);
}

TEST_CASE("unknown sections are rejected") {
    const std::string msg = message_of("[sovler]\ndelta = 1e-3\n");
    CHECK(msg.find("sovler") != std::string::npos);
    CHECK(msg.find("solver") != std::string::npos);
}

TEST_CASE("all violations are collected into one report") {
    const std::string msg = message_of(
        "[domain]\n"
        "nx = 2\n"
        "[fractional]\n"
        "s = 1.5\n"
        "[solver]\n"
        "detla = 1e-3\n");
    CHECK(msg.find("3 violations") != std::string::npos);
    CHECK(msg.find("nx") != std::string::npos);
    CHECK(msg.find("(0, 1)") != std::string::npos); // s names the open interval
    CHECK(msg.find("delta") != std::string::npos);
}

TEST_CASE("duplicate keys are refused with the first line cited") {
    const std::string msg = message_of("[solver]\ndelta = 1e-3\ndelta = 2e-3\n");
    CHECK(msg.find("duplicate") != std::string::npos);
    CHECK(msg.find("delta") != std::string::npos);
}

TEST_CASE("lines that are not key = value are violations") {
    const std::string msg = message_of("[solver]\ndelta\n");
    CHECK(!msg.empty());
    CHECK(msg.find("delta") != std::string::npos);
}

TEST_CASE("the desk-scale cap on unknowns is enforced at parse time") {
    const std::string msg = message_of(
        "[domain]\n"
        "dim = 2\n"
        "nx = 80\n"
        "ny = 80\n"); // 6400 cells > 4096
    CHECK(msg.find("4096") != std::string::npos);
}

TEST_CASE("malformed numbers inside lists are reported") {
    const std::string msg = message_of("[probes]\ntaus = 1, twelve, 0.5\n");
    CHECK(msg.find("taus") != std::string::npos);
}

TEST_CASE("the echo is complete, ordered, and omits the output directory") {
    RunConfig c = parse_config("[output]\ndir = /tmp/x\n");
    const auto echo = c.echo();
    CHECK(echo.count("domain.dim") == 1);
    CHECK(echo.count("fractional.s") == 1);
    CHECK(echo.count("probes.taus") == 1);
    CHECK(echo.count("output.dir") == 0);
    CHECK(echo.at("solver.delta") == "0.001");
    CHECK(echo.at("domain.nx") == "128");

    // Identical configurations echo identically regardless of where the
    // artifacts land: byte-identical outputs depend on this.
    RunConfig d = parse_config("[output]\ndir = /somewhere/else\n");
    CHECK(d.echo() == echo);
}

TEST_CASE("missing files are configuration errors") {
    CHECK_THROWS_AS((void)load_config_file("/nonexistent/path.ini"), ConfigError);
}
