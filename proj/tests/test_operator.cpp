#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/elliptic.hpp"
#include "fraclab/gradient.hpp"
#include "fraclab/linsolve.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/spectral.hpp"

#ifdef FRACLAB_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include <cmath>
#include <vector>

using namespace fraclab;

namespace {

EllipticOperator make_op_2d() {
    const Grid g = build_grid_2d(1.0, 1.0, 8, 8);
    return assemble_elliptic(g,
                             sample_coefficient(g, CoefficientSpec::rotated(
                                                       0.6, 2.0, 0.7)));
}

std::vector<double> random_field(int n, Rng& rng) {
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& v : u) v = rng.symmetric();
    return u;
}

} // namespace

TEST_CASE("operator is self-adjoint in the weighted inner product") {
    const EllipticOperator op = make_op_2d();
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> u = random_field(op.grid.cells, rng);
        const std::vector<double> v = random_field(op.grid.cells, rng);
        const double a = op.inner(op.apply(u), v);
        const double b = op.inner(u, op.apply(v));
        CHECK(std::fabs(a - b) <= 1e-13 * std::max(std::fabs(a), 1.0));
    }
}

TEST_CASE("rows are signed sums of face fluxes") {
    const EllipticOperator op = make_op_2d();
    const Grid& g = op.grid;
    Rng rng(7);
    const std::vector<double> u = random_field(g.cells, rng);
    const std::vector<double> ka_u = op.apply(u);

    std::vector<double> from_fluxes(static_cast<std::size_t>(g.cells), 0.0);
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        const double T = op.face_flux(u, static_cast<int>(f));
        const Face& face = g.faces[f];
        if (face.to >= 0) from_fluxes[face.to] += T;
        if (face.from >= 0) from_fluxes[face.from] -= T;
    }
    for (int i = 0; i < g.cells; ++i)
        CHECK(std::fabs(ka_u[i] * op.weights[i] - from_fluxes[i]) <= 1e-12);
}

TEST_CASE("total weighted row sum telescopes to the boundary outflow") {
    const EllipticOperator op = make_op_2d();
    Rng rng(11);
    const std::vector<double> v = random_field(op.grid.cells, rng);
    const std::vector<double> ka_v = op.apply(v);
    double total = 0.0;
    for (int i = 0; i < op.grid.cells; ++i) total += ka_v[i] * op.weights[i];
    CHECK(std::fabs(total - op.boundary_outflow(v)) <= 1e-12);
}

TEST_CASE("discrete gradient norm reproduces the identity energy") {
    const EllipticOperator op = make_op_2d();
    Rng rng(3);
    const std::vector<double> u = random_field(op.grid.cells, rng);
    const double by_gradient =
        gradient_norm_sq(op.grid, discrete_gradient(op.grid, u));
    const double by_operator = dirichlet_energy_identity(op, u);
    CHECK(by_gradient ==
          doctest::Approx(by_operator).epsilon(1e-12));
}

TEST_CASE("shifted solve inverts (I + alpha K)") {
    const EllipticOperator op = make_op_2d();
    Rng rng(19);
    const std::vector<double> x_ref = random_field(op.grid.cells, rng);
    const double alpha = 3.7e-3;
    std::vector<double> rhs = op.apply(x_ref);
    for (int i = 0; i < op.grid.cells; ++i)
        rhs[i] = x_ref[i] + alpha * rhs[i];
    std::vector<double> x(static_cast<std::size_t>(op.grid.cells), 0.0);
    shifted_solve(op.KA, alpha, rhs, x);
    for (int i = 0; i < op.grid.cells; ++i)
        CHECK(x[i] == doctest::Approx(x_ref[i]).epsilon(1e-10));
}

TEST_CASE("gershgorin bound dominates the spectrum") {
    const EllipticOperator op = make_op_2d();
    const SpectralDecomposition dec = eigendecompose(op);
    CHECK(dec.lambda_max() <= op.gershgorin_max() * (1.0 + 1e-12));
    CHECK(dec.lambda1() > 0.0);
}

#ifdef FRACLAB_HAVE_EIGEN
TEST_CASE("eigendecomposition matches a dense oracle") {
    for (int which = 0; which < 2; ++which) {
        EllipticOperator op =
            which == 0
                ? assemble_elliptic(
                      build_grid_1d(1.0, 48),
                      sample_coefficient(build_grid_1d(1.0, 48),
                                         CoefficientSpec::smooth_anisotropic()))
                : make_op_2d();
        const int n = op.grid.cells;

        Eigen::MatrixXd dense(n, n);
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) {
            e[j] = 1.0;
            const std::vector<double> col = op.apply(e);
            for (int i = 0; i < n; ++i) dense(i, j) = col[i];
            e[j] = 0.0;
        }
        // Uniform weights make the weighted operator plain-symmetric.
        CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-10);

        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(dense);
        REQUIRE(oracle.info() == Eigen::Success);

        const SpectralDecomposition dec = eigendecompose(op);
        for (int k = 0; k < n; ++k) {
            const double mine = dec.values[static_cast<std::size_t>(k)];
            const double ref = oracle.eigenvalues()(k);
            CHECK(std::fabs(mine - ref) <= 1e-10 * std::max(ref, 1.0));
        }

        // Orthonormality in the weighted inner product.
        Rng rng(5);
        for (int trial = 0; trial < 5; ++trial) {
            const int a = static_cast<int>(rng.uniform() * n);
            const int b = static_cast<int>(rng.uniform() * n);
            double dot = 0.0;
            for (int i = 0; i < n; ++i)
                dot += dec.mode(a)[i] * dec.mode(b)[i] * dec.weight;
            CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) <= 1e-11);
        }
    }
}
#endif

TEST_CASE("spectral synthesis round trip") {
    const EllipticOperator op = make_op_2d();
    const SpectralDecomposition dec = eigendecompose(op);
    Rng rng(23);
    const std::vector<double> u = random_field(op.grid.cells, rng);
    std::vector<double> c, back;
    dec.coefficients(u, c);
    dec.synthesize(c, back);
    for (int i = 0; i < op.grid.cells; ++i)
        CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-11));
}
