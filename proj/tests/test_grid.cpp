#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/coefficient.hpp"
#include "fraclab/deformation.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/levelset.hpp"

#include <cmath>

using namespace fraclab;

TEST_CASE("1d grid geometry") {
    const Grid g = build_grid_1d(2.0, 7);
    CHECK(g.dim == 1);
    CHECK(g.cells == 7);
    CHECK(g.h[0] == doctest::Approx(0.25));
    CHECK(g.node_x(0) == doctest::Approx(0.25));
    CHECK(g.node_x(6) == doctest::Approx(1.75));
    CHECK(g.faces.size() == 8);
    CHECK(g.volume_sum() == doctest::Approx(7 * 0.25));
    int boundary = 0;
    for (const Face& f : g.faces)
        if (f.boundary()) ++boundary;
    CHECK(boundary == 2);
}

TEST_CASE("2d grid geometry") {
    const Grid g = build_grid_2d(1.0, 2.0, 3, 4);
    CHECK(g.dim == 2);
    CHECK(g.cells == 12);
    CHECK(g.h[0] == doctest::Approx(0.25));
    CHECK(g.h[1] == doctest::Approx(0.4));
    // Faces: (nx+1)*ny horizontal-normal + nx*(ny+1) vertical-normal.
    CHECK(static_cast<int>(g.faces.size()) == 4 * 4 + 3 * 5);
    const int id = g.cell_id(2, 3);
    CHECK(g.node_x(id) == doctest::Approx(0.5));
    CHECK(g.node_y(id) == doctest::Approx(1.2));
}

TEST_CASE("coefficient sampling certifies ellipticity range") {
    const Grid g = build_grid_2d(1.0, 1.0, 6, 6);
    const CoefficientField rot =
        sample_coefficient(g, CoefficientSpec::rotated(0.7, 3.0, 0.5));
    CHECK(rot.lambda_lo == doctest::Approx(0.5));
    CHECK(rot.lambda_hi == doctest::Approx(3.0));

    const CoefficientField cst =
        sample_coefficient(g, CoefficientSpec::constant(2.5));
    CHECK(cst.lambda_lo == doctest::Approx(2.5));
    CHECK(cst.lambda_hi == doctest::Approx(2.5));
}

TEST_CASE("1d deformation shells are offset endpoint pairs") {
    const Grid g = build_grid_1d(1.0, 16);
    const Deformation def = build_deformation(g, 0.1, {0.5, 0.25});
    const Shell& s = def.shell_for(0.5);
    REQUIRE(s.nodes.size() == 2);
    CHECK(s.nodes[0].x == doctest::Approx(0.05));
    CHECK(s.nodes[1].x == doctest::Approx(0.95));
    CHECK(s.nodes[0].nx == doctest::Approx(-1.0));
    CHECK(s.nodes[1].nx == doctest::Approx(1.0));
    CHECK(s.weight_sum() == doctest::Approx(2.0));
    CHECK_THROWS_AS(def.shell_for(0.75), ConfigError);
}

TEST_CASE("tau zero shell is the boundary itself") {
    const Grid g = build_grid_1d(1.0, 8);
    const Deformation def = build_deformation(g, 0.1, {0.5, 0.0});
    const Shell& s = def.shell_for(0.0);
    CHECK(s.nodes[0].x == doctest::Approx(0.0));
    CHECK(s.nodes[1].x == doctest::Approx(1.0));
}

TEST_CASE("2d shell quadrature weight sums to the offset perimeter") {
    const Grid g = build_grid_2d(1.0, 1.0, 24, 24);
    const Deformation def = build_deformation(g, 0.1, {1.0, 0.5});
    const Shell& s = def.shell_for(1.0);
    // Inward offset 0.1 on the unit square: perimeter 4 * (1 - 2 * 0.1).
    CHECK(s.weight_sum() == doctest::Approx(4 * 0.8).epsilon(1e-12));
    for (const ShellNode& nd : s.nodes) {
        CHECK(nd.weight > 0.0);
        CHECK(std::fabs(nd.nx * nd.nx + nd.ny * nd.ny - 1.0) < 1e-14);
    }
}

TEST_CASE("colliding shells are rejected") {
    const Grid g = build_grid_2d(1.0, 1.0, 8, 8);
    CHECK_THROWS_AS(build_deformation(g, 0.3, {2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(build_deformation(g, 0.1, {1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(build_deformation(g, -0.1, {1.0}), ConfigError);
}

TEST_CASE("level set saturates away from the boundary") {
    const Grid g = build_grid_2d(1.0, 1.0, 15, 15);
    const Deformation def = build_deformation(g, 0.1, {1.0});
    const LevelSetField level = build_level_set(def, g);
    // Center node: distance 0.5 from every side, far beyond epsilon.
    const int center = g.cell_id(8, 8);
    CHECK(level.h[center] == doctest::Approx(1.0));
    // Node adjacent to the left wall: h = node_x / epsilon.
    const int near = g.cell_id(1, 8);
    CHECK(level.h[near] == doctest::Approx(g.h[0] / 0.1));
    for (double v : level.h) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("level of shell nodes matches tau within a grid spacing") {
    const Grid g = build_grid_2d(1.0, 1.0, 32, 32);
    const double eps = 0.1;
    const Deformation def = build_deformation(g, eps, {1.0, 0.5, 0.25});
    const LevelSetField level = build_level_set(def, g);
    for (double tau : {1.0, 0.5, 0.25}) {
        const Shell& s = def.shell_for(tau);
        for (const ShellNode& nd : s.nodes) {
            // Interpolate h at the shell node from the nearest grid node.
            int best = 0;
            double best_d = 1e300;
            for (int i = 0; i < g.cells; ++i) {
                const double dx = g.node_x(i) - nd.x;
                const double dy = g.node_y(i) - nd.y;
                const double d = dx * dx + dy * dy;
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            CHECK(std::fabs(level.h[best] - tau) <= g.min_h() / eps + 1e-12);
        }
    }
}

TEST_CASE("cutoff family values and norms") {
    const Grid g = build_grid_2d(1.0, 1.0, 32, 32);
    const Deformation def = build_deformation(g, 0.1, {1.0});
    const LevelSetField level = build_level_set(def, g);
    const CutoffFamily fam = build_cutoffs(level, g, {4, 16, 64});
    REQUIRE(fam.members.size() == 3);

    for (const CutoffMember& m : fam.members) {
        for (double xi : m.xi) {
            CHECK(xi >= 0.0);
            CHECK(xi <= 1.0);
        }
        CHECK(m.l2_one_minus_xi > 0.0);
        CHECK(m.l2_grad_xi > 0.0);
    }
    // Saturated node: xi_k = 1 - exp(-k).
    const int center = g.cell_id(16, 16);
    CHECK(fam.members[0].xi[center] ==
          doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
    // The L2 defect decreases strictly in k.
    CHECK(fam.members[1].l2_one_minus_xi < fam.members[0].l2_one_minus_xi);
    CHECK(fam.members[2].l2_one_minus_xi < fam.members[1].l2_one_minus_xi);

    CHECK_THROWS_AS(build_cutoffs(level, g, {}), ConfigError);
    CHECK_THROWS_AS(build_cutoffs(level, g, {4, 4}), ConfigError);
    CHECK_THROWS_AS(build_cutoffs(level, g, {0, 4}), ConfigError);
}
