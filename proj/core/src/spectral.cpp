#include "fraclab/spectral.hpp"
#include "fraclab/eigensolve.hpp"
#include "fraclab/errors.hpp"

#include <cmath>
#include <string>

namespace fraclab {

void SpectralDecomposition::coefficients(const std::vector<double>& u,
                                         std::vector<double>& c) const {
    c.resize(n);
    for (int k = 0; k < n; ++k) {
        const double* phi = mode(k);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += phi[i] * u[i];
        c[k] = acc * weight;
    }
}

void SpectralDecomposition::synthesize(const std::vector<double>& c,
                                       std::vector<double>& u) const {
    u.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double ck = c[k];
        if (ck == 0.0) continue;
        const double* phi = mode(k);
        for (int i = 0; i < n; ++i) u[i] += ck * phi[i];
    }
}

double SpectralDecomposition::power_norm_sq(double r, const std::vector<double>& u) const {
    std::vector<double> c;
    coefficients(u, c);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += std::pow(values[k], 2.0 * r) * c[k] * c[k];
    return acc;
}

SpectralDecomposition eigendecompose(const EllipticOperator& op) {
    const int n = op.KA.n;
    if (n > kEigendecomposeCap)
        throw AccuracyError("eigendecompose: " + std::to_string(n) +
                            " unknowns exceed the dense desk-scale cap of " +
                            std::to_string(kEigendecomposeCap));

    std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = op.KA.row_ptr[i]; k < op.KA.row_ptr[i + 1]; ++k)
            dense[static_cast<std::size_t>(i) * n + op.KA.col[k]] = op.KA.val[k];

    SpectralDecomposition dec;
    dec.n = n;
    dec.weight = op.grid.cell_volume;
    symmetric_eigensolve(dense, n, dec.values, dec.vectors);

    if (!(dec.values.front() > 0.0))
        throw NumericalError("eigendecompose: non-positive smallest eigenvalue " +
                             std::to_string(dec.values.front()) +
                             "; operator lost definiteness");

    // Rescale plain-orthonormal vectors to weighted orthonormality.
    const double scale = 1.0 / std::sqrt(dec.weight);
    for (double& v : dec.vectors) v *= scale;
    return dec;
}

std::vector<double> apply_power(const SpectralDecomposition& dec, double r,
                                const std::vector<double>& u) {
    std::vector<double> c;
    dec.coefficients(u, c);
    for (int k = 0; k < dec.n; ++k) c[k] *= std::pow(dec.values[k], r);
    std::vector<double> out;
    dec.synthesize(c, out);
    return out;
}

} // namespace fraclab
