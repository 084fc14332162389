#include "fraclab/coefficient.hpp"
#include "fraclab/errors.hpp"

#include <cmath>
#include <cstdio>

namespace fraclab {

CoefficientSpec CoefficientSpec::constant(double c) {
    CoefficientSpec s;
    s.family = CoefficientFamily::ConstantIsotropic;
    s.value = c;
    return s;
}

CoefficientSpec CoefficientSpec::smooth_anisotropic() {
    CoefficientSpec s;
    s.family = CoefficientFamily::SmoothAnisotropic;
    return s;
}

CoefficientSpec CoefficientSpec::rotated(double theta, double e1, double e2) {
    CoefficientSpec s;
    s.family = CoefficientFamily::RotatedAnisotropy;
    s.theta = theta;
    s.eig1 = e1;
    s.eig2 = e2;
    return s;
}

std::string family_name(CoefficientFamily f) {
    switch (f) {
        case CoefficientFamily::ConstantIsotropic: return "constant";
        case CoefficientFamily::SmoothAnisotropic: return "smooth_anisotropic";
        case CoefficientFamily::RotatedAnisotropy: return "rotated_anisotropy";
    }
    return "unknown";
}

CoefficientFamily family_from_name(const std::string& name) {
    if (name == "constant") return CoefficientFamily::ConstantIsotropic;
    if (name == "smooth_anisotropic") return CoefficientFamily::SmoothAnisotropic;
    if (name == "rotated_anisotropy") return CoefficientFamily::RotatedAnisotropy;
    throw ConfigError("coefficient: unknown family '" + name +
                      "' (known: constant, smooth_anisotropic, rotated_anisotropy)");
}

void CoefficientField::face_eigs(std::size_t f, int dim, double& lo, double& hi) const {
    if (dim == 1) {
        lo = hi = a11[f];
        return;
    }
    const double mean = 0.5 * (a11[f] + a22[f]);
    const double rad = std::sqrt(0.25 * (a11[f] - a22[f]) * (a11[f] - a22[f]) +
                                 a12[f] * a12[f]);
    lo = mean - rad;
    hi = mean + rad;
}

namespace {

void eval_at(const CoefficientSpec& spec, int dim, double x, double /*y*/,
             double& a11, double& a12, double& a22) {
    switch (spec.family) {
        case CoefficientFamily::ConstantIsotropic:
            a11 = spec.value;
            a12 = 0.0;
            a22 = spec.value;
            return;
        case CoefficientFamily::SmoothAnisotropic:
            a11 = 1.0 + 0.5 * std::sin(2.0 * M_PI * x);
            a12 = 0.0;
            a22 = 2.0;
            return;
        case CoefficientFamily::RotatedAnisotropy: {
            const double c = std::cos(spec.theta), s = std::sin(spec.theta);
            if (dim == 1) {
                // Restriction of the 2D quadratic form to the x-axis.
                a11 = spec.eig1 * c * c + spec.eig2 * s * s;
                a12 = 0.0;
                a22 = 0.0;
                return;
            }
            a11 = spec.eig1 * c * c + spec.eig2 * s * s;
            a22 = spec.eig1 * s * s + spec.eig2 * c * c;
            a12 = (spec.eig1 - spec.eig2) * s * c;
            return;
        }
    }
}

} // namespace

CoefficientField sample_coefficient(const Grid& grid, const CoefficientSpec& spec) {
    CoefficientField field;
    field.family_name = family_name(spec.family);
    const std::size_t m = grid.faces.size();
    field.a11.resize(m);
    field.a12.assign(m, 0.0);
    field.a22.assign(m, 0.0);

    for (std::size_t f = 0; f < m; ++f) {
        const Face& face = grid.faces[f];
        eval_at(spec, grid.dim, face.cx, face.cy,
                field.a11[f], field.a12[f], field.a22[f]);
    }

    double lo = 0.0, hi = 0.0;
    for (std::size_t f = 0; f < m; ++f) {
        double flo, fhi;
        field.face_eigs(f, grid.dim, flo, fhi);
        if (!(flo > 0.0)) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "coefficient '%s' not uniformly elliptic at face %zu "
                          "(a11=%g a12=%g a22=%g, min eigenvalue %g)",
                          field.family_name.c_str(), f, field.a11[f], field.a12[f],
                          field.a22[f], flo);
            throw EllipticityError(buf);
        }
        if (f == 0) {
            lo = flo;
            hi = fhi;
        } else {
            if (flo < lo) lo = flo;
            if (fhi > hi) hi = fhi;
        }
    }
    field.lambda_lo = lo;
    field.lambda_hi = hi;
    return field;
}

} // namespace fraclab
