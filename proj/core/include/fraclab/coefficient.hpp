#pragma once

#include "fraclab/grid.hpp"

#include <string>
#include <vector>

namespace fraclab {

enum class CoefficientFamily {
    ConstantIsotropic,  // A = c * I
    SmoothAnisotropic,  // a11 = 1 + 0.5 sin(2 pi x), a22 = 2, a12 = 0
    RotatedAnisotropy,  // A = R(theta) diag(e1, e2) R(theta)^T, constant
};

struct CoefficientSpec {
    CoefficientFamily family = CoefficientFamily::ConstantIsotropic;
    double value = 1.0; // ConstantIsotropic
    double theta = 0.0; // RotatedAnisotropy
    double eig1 = 1.0;
    double eig2 = 1.0;

    static CoefficientSpec constant(double c);
    static CoefficientSpec smooth_anisotropic();
    static CoefficientSpec rotated(double theta, double e1, double e2);
};

// Symmetric coefficient matrix sampled at face centroids, with the
// certified facewise eigenvalue range [lambda_lo, lambda_hi]. In 1D only
// a11 is meaningful; the rotated family restricts to its quadratic form
// along the axis, a = e1 cos^2(theta) + e2 sin^2(theta).
struct CoefficientField {
    std::string family_name;
    std::vector<double> a11;
    std::vector<double> a12;
    std::vector<double> a22;
    double lambda_lo = 0.0; // min facewise eigenvalue (ellipticity floor)
    double lambda_hi = 0.0; // max facewise eigenvalue

    // Eigenvalue range of the face matrix f.
    void face_eigs(std::size_t f, int dim, double& lo, double& hi) const;
};

// Samples the family at every face centroid and certifies uniform
// ellipticity. Throws EllipticityError naming the first offending face and
// its entries when the facewise minimum eigenvalue is not positive.
CoefficientField sample_coefficient(const Grid& grid, const CoefficientSpec& spec);

std::string family_name(CoefficientFamily f);
CoefficientFamily family_from_name(const std::string& name);

} // namespace fraclab
