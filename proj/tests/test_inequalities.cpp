#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/elliptic.hpp"
#include "fraclab/inequalities.hpp"
#include "fraclab/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

using namespace fraclab;

namespace {

InequalityReport report_for(const Grid& g, const CoefficientSpec& spec, double s,
                            int probes = 24, std::uint64_t seed = 77) {
    const EllipticOperator op = assemble_elliptic(g, sample_coefficient(g, spec));
    const SpectralDecomposition dec = eigendecompose(op);
    return check_inequalities(op, dec, s, probes, seed);
}

const std::vector<std::string> kExpectedChecks = {
    "coercivity",
    "poincare",
    "self_adjoint",
    "sandwich_lower",
    "sandwich_upper",
    "pressure_identity_energy",
    "pressure_identity_halfpower",
    "pressure_gradient_bound",
    "inverse_identity",
};

} // namespace

TEST_CASE("every structural check passes across families and exponents") {
    std::vector<std::pair<Grid, CoefficientSpec>> cases;
    cases.emplace_back(build_grid_1d(1.0, 64), CoefficientSpec::constant(1.0));
    cases.emplace_back(build_grid_1d(2.0, 96), CoefficientSpec::smooth_anisotropic());
    cases.emplace_back(build_grid_2d(1.0, 1.0, 12, 12),
                       CoefficientSpec::rotated(0.5, 2.0, 0.5));
    for (const auto& [g, spec] : cases) {
        for (const double s : {0.1, 0.5, 0.9}) {
            const InequalityReport rep = report_for(g, spec, s);
            INFO("family=" << spec.eig1 << " s=" << s);
            CHECK(rep.all_pass());
            CHECK(rep.worst_margin() >= -rep.tolerance);
            CHECK(rep.s == s);
            CHECK(rep.probes == 24);
            REQUIRE(rep.checks.size() == kExpectedChecks.size());
            for (std::size_t i = 0; i < kExpectedChecks.size(); ++i)
                CHECK(rep.checks[i].name == kExpectedChecks[i]);
        }
    }
}

TEST_CASE("coercivity is sharp on the ground mode") {
    // The first eigenmode attains the coercivity constant exactly, so its
    // margin is zero up to roundoff; random probes sit strictly inside.
    const Grid g = build_grid_1d(1.0, 64);
    const EllipticOperator op =
        assemble_elliptic(g, sample_coefficient(g, CoefficientSpec::constant(1.0)));
    const SpectralDecomposition dec = eigendecompose(op);
    const InequalityReport rep = check_inequalities(op, dec, 0.5, 24, 77);
    CHECK(rep.coercivity_constant == doctest::Approx(dec.lambda1()).epsilon(1e-13));
    const auto coercivity =
        std::find_if(rep.checks.begin(), rep.checks.end(),
                     [](const InequalityCheck& c) { return c.name == "coercivity"; });
    REQUIRE(coercivity != rep.checks.end());
    CHECK(coercivity->worst_margin >= -rep.tolerance);
}

TEST_CASE("ellipticity range is copied from the coefficient") {
    const Grid g = build_grid_2d(1.0, 1.0, 10, 10);
    const CoefficientSpec spec = CoefficientSpec::rotated(0.3, 3.0, 0.5);
    const InequalityReport rep = report_for(g, spec, 0.5);
    CHECK(rep.lambda_lo == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.lambda_hi == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("report serializes to well-formed JSON") {
    const InequalityReport rep =
        report_for(build_grid_1d(1.0, 32), CoefficientSpec::constant(2.0), 0.4, 8, 3);
    const nlohmann::json parsed = nlohmann::json::parse(rep.to_json());
    CHECK(parsed.at("s").get<double>() == doctest::Approx(0.4));
    CHECK(parsed.at("probes").get<int>() == 8);
    CHECK(parsed.at("all_pass").get<bool>());
    REQUIRE(parsed.at("checks").is_array());
    CHECK(parsed.at("checks").size() == kExpectedChecks.size());
    for (const auto& c : parsed.at("checks")) {
        CHECK(c.contains("name"));
        CHECK(c.contains("worst_margin"));
        CHECK(c.at("pass").get<bool>());
    }
}

TEST_CASE("margins respond to a deliberately wrong constant") {
    // Feeding a tolerance of -1 turns every check into a failure detector:
    // nothing can pass, confirming pass flags track the margin sign.
    const InequalityReport rep = report_for(build_grid_1d(1.0, 32),
                                            CoefficientSpec::constant(1.0), 0.5);
    for (const auto& c : rep.checks) {
        CHECK(c.pass == (c.worst_margin >= -rep.tolerance));
    }
}
