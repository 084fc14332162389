#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/elliptic.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/semigroup.hpp"
#include "fraclab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace fraclab;

namespace {

std::vector<double> random_field(int n, Rng& rng) {
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& v : u) v = rng.symmetric();
    return u;
}

double rel_err(const EllipticOperator& op, const std::vector<double>& got,
               const std::vector<double>& want) {
    std::vector<double> d(got.size());
    for (std::size_t i = 0; i < got.size(); ++i) d[i] = got[i] - want[i];
    return op.norm(d) / op.norm(want);
}

} // namespace

TEST_CASE("constant-coefficient spectrum matches the sine formula") {
    const double c = 1.7;
    const int n = 48;
    const Grid g = build_grid_1d(1.0, n);
    const EllipticOperator op =
        assemble_elliptic(g, sample_coefficient(g, CoefficientSpec::constant(c)));
    const SpectralDecomposition dec = eigendecompose(op);
    const double h = g.h[0];
    for (int k = 1; k <= n; ++k) {
        const double sine = std::sin(0.5 * k * std::numbers::pi * h);
        const double exact = c * 4.0 / (h * h) * sine * sine;
        const double mine = dec.values[static_cast<std::size_t>(k - 1)];
        CHECK(std::fabs(mine - exact) <= 1e-10 * exact);
    }
    CHECK(dec.lambda1() == doctest::Approx(op.identity_lambda1() * c).epsilon(1e-12));
}

TEST_CASE("fractional powers compose and invert") {
    const Grid g = build_grid_2d(1.0, 0.8, 10, 8);
    const EllipticOperator op = assemble_elliptic(
        g, sample_coefficient(g, CoefficientSpec::rotated(0.4, 1.5, 0.6)));
    const SpectralDecomposition dec = eigendecompose(op);
    Rng rng(99);
    const std::vector<double> u = random_field(g.cells, rng);

    for (const double s : {0.2, 0.5, 0.8}) {
        const std::vector<double> forward = apply_power(dec, s, u);
        const std::vector<double> round = apply_power(dec, -s, forward);
        CHECK(rel_err(op, round, u) <= 1e-10);

        const std::vector<double> half = apply_power(dec, -0.5 * s, u);
        const std::vector<double> two_halves = apply_power(dec, -0.5 * s, half);
        const std::vector<double> whole = apply_power(dec, -s, u);
        CHECK(rel_err(op, two_halves, whole) <= 1e-12);
    }
}

TEST_CASE("power norm agrees with transforming then measuring") {
    const Grid g = build_grid_1d(1.0, 32);
    const EllipticOperator op = assemble_elliptic(
        g, sample_coefficient(g, CoefficientSpec::smooth_anisotropic()));
    const SpectralDecomposition dec = eigendecompose(op);
    Rng rng(5);
    const std::vector<double> u = random_field(g.cells, rng);
    for (const double r : {-0.5, -0.25, 0.25, 0.5}) {
        const std::vector<double> t = apply_power(dec, r, u);
        const double direct = op.inner(t, t);
        CHECK(dec.power_norm_sq(r, u) == doctest::Approx(direct).epsilon(1e-11));
    }
}

TEST_CASE("integer power reproduces the operator itself") {
    const Grid g = build_grid_1d(1.0, 24);
    const EllipticOperator op = assemble_elliptic(
        g, sample_coefficient(g, CoefficientSpec::constant(2.0)));
    const SpectralDecomposition dec = eigendecompose(op);
    Rng rng(17);
    const std::vector<double> u = random_field(g.cells, rng);
    const std::vector<double> via_spectrum = apply_power(dec, 1.0, u);
    const std::vector<double> direct = op.apply(u);
    CHECK(rel_err(op, via_spectrum, direct) <= 1e-11);
}

TEST_CASE("semigroup quadrature reproduces the spectral transforms") {
    // The inverse power smooths, so a rough field is fine; the positive
    // power amplifies high modes, so measure it on a mollified field where
    // the quadrature's frequency cap is honest.
    for (const bool anisotropic : {false, true}) {
        const Grid g = build_grid_1d(1.0, 40);
        const CoefficientSpec spec = anisotropic
                                         ? CoefficientSpec::smooth_anisotropic()
                                         : CoefficientSpec::constant(1.0);
        const EllipticOperator op = assemble_elliptic(g, sample_coefficient(g, spec));
        const SpectralDecomposition dec = eigendecompose(op);

        Rng rng(1234);
        std::vector<double> rough = random_field(g.cells, rng);
        std::vector<double> smooth = apply_power(dec, -1.0, rough);

        for (const double s : {0.3, 0.5, 0.7}) {
            const SemigroupResult inv = apply_inverse_power_semigroup(op, s, rough);
            const std::vector<double> inv_ref = apply_power(dec, -s, rough);
            CHECK(rel_err(op, inv.value, inv_ref) <= 5e-6);
            CHECK(inv.self_difference <= 1e-7);

            const SemigroupResult fwd = apply_power_semigroup(op, s, smooth);
            const std::vector<double> fwd_ref = apply_power(dec, s, smooth);
            CHECK(rel_err(op, fwd.value, fwd_ref) <= 5e-6);
        }
    }
}

TEST_CASE("heat propagation decays a single mode at its eigenrate") {
    const Grid g = build_grid_1d(1.0, 32);
    const EllipticOperator op = assemble_elliptic(
        g, sample_coefficient(g, CoefficientSpec::constant(1.0)));
    const SpectralDecomposition dec = eigendecompose(op);
    const int k = 2;
    std::vector<double> v(dec.mode(k), dec.mode(k) + g.cells);
    const double lambda = dec.values[static_cast<std::size_t>(k)];
    const double t = 1.5 / lambda;
    heat_propagate(op, dec.lambda_max(), 0.0, t, v);
    const double factor = std::exp(-t * lambda);
    std::vector<double> expected(static_cast<std::size_t>(g.cells));
    for (int i = 0; i < g.cells; ++i) expected[i] = factor * dec.mode(k)[i];
    CHECK(rel_err(op, v, expected) <= 1e-4);
}

TEST_CASE("eigendecomposition refuses the desk-scale cap") {
    const Grid g = build_grid_2d(1.0, 1.0, 80, 80); // 6400 > 4096
    const EllipticOperator op = assemble_elliptic(
        g, sample_coefficient(g, CoefficientSpec::constant(1.0)));
    CHECK_THROWS_AS((void)eigendecompose(op), AccuracyError);
}
