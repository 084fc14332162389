#pragma once

#include "fraclab/elliptic.hpp"

#include <vector>

namespace fraclab {

// Full Dirichlet eigendecomposition of the elliptic operator. Eigenvalues
// ascending; eigenvectors are stored contiguously (mode k at
// vectors[k*n ...]) and are orthonormal in the weighted inner product
// <u,v> = sum u_i v_i w_i.
struct SpectralDecomposition {
    int n = 0;
    double weight = 0.0; // uniform cell measure
    std::vector<double> values;
    std::vector<double> vectors;

    double lambda1() const { return values.front(); }
    double lambda_max() const { return values.back(); }
    const double* mode(int k) const { return vectors.data() + static_cast<std::size_t>(k) * n; }

    // c_k = <u, phi_k>_w
    void coefficients(const std::vector<double>& u, std::vector<double>& c) const;
    // u = sum c_k phi_k
    void synthesize(const std::vector<double>& c, std::vector<double>& u) const;

    // sum_k lambda_k^(2r) c_k^2  ==  |L^r u|_w^2
    double power_norm_sq(double r, const std::vector<double>& u) const;
};

inline constexpr int kEigendecomposeCap = 4096;

// Dense eigendecomposition of KA. Throws AccuracyError when the unknown
// count exceeds the desk-scale cap, NumericalError when the solve fails or
// produces a non-positive spectrum.
SpectralDecomposition eigendecompose(const EllipticOperator& op);

// u -> sum_k lambda_k^r <u,phi_k>_w phi_k. r = -s applies the inverse
// fractional power (the nonlocal pressure transform), r = -s/2 its half.
std::vector<double> apply_power(const SpectralDecomposition& dec, double r,
                                const std::vector<double>& u);

} // namespace fraclab
