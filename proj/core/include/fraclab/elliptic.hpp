#pragma once

#include "fraclab/coefficient.hpp"
#include "fraclab/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace fraclab {

// Plain symmetric sparse matrix in CSR form.
struct SparseSym {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;
    double entry(int i, int j) const; // 0 when absent (linear scan of row i)
    std::string to_coo_text() const;  // "i j value" per line
};

// Flux-form discretization of -div(A grad .) with homogeneous Dirichlet
// data, assembled from a facewise quadratic energy form. In 2D the mixed
// a12 term couples the four face differences meeting at each mesh corner
// (coefficients averaged from the incident faces), which keeps the matrix
// exactly symmetric, keeps every row an exact difference of per-face
// fluxes, and sandwiches the energy between lambda_lo and lambda_hi times
// the identity-coefficient energy for every vector.
struct EllipticOperator {
    Grid grid;
    CoefficientField coeff;
    std::vector<double> weights; // cell measures w_i (uniform)
    SparseSym KA;                // anisotropic operator
    SparseSym KI;                // identity-coefficient operator, same grid

    // Corner-averaged coefficients (2D assembly and flux path).
    std::vector<double> ca11, ca12, ca22;
    // The two corners incident to each face (2D; {-1,-1} in 1D).
    std::vector<std::array<int, 2>> face_corners;

    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    std::vector<double> apply(const std::vector<double>& u) const;
    void apply_identity(const std::vector<double>& u, std::vector<double>& out) const;

    // Weighted inner product <u,v> = sum u_i v_i w_i and its norm.
    double inner(const std::vector<double>& u, const std::vector<double>& v) const;
    double norm(const std::vector<double>& u) const;

    // Face flux integral T_f(u) ~ (A grad u . e_axis) * area at face f,
    // oriented along +axis, with Dirichlet ghosts at zero. Rows of KA are
    // exact signed sums of these: (KA u)_i = (1/w) sum_f sigma_{f,i} T_f(u).
    double face_flux(const std::vector<double>& u, int f) const;

    // Same for the identity coefficient (two-point difference * area / h).
    double face_flux_identity(const std::vector<double>& u, int f) const;

    // Signed sum of T_f over boundary faces: total outflow integral of
    // -A grad u through the domain boundary. Mass bookkeeping uses this.
    double boundary_outflow(const std::vector<double>& u) const;

    // Gershgorin upper bound for the spectrum of KA.
    double gershgorin_max() const;
    // Closed-form smallest eigenvalue of KI on this tensor grid.
    double identity_lambda1() const;
};

EllipticOperator assemble_elliptic(const Grid& grid, const CoefficientField& coeff);

// Energy sum_corners (or faces in 1D) of the quadratic form: approximates
// int A grad u . grad u. Equals <KA u, u>_w up to summation roundoff.
double dirichlet_energy(const EllipticOperator& op, const std::vector<double>& u);

// Identity-coefficient energy accumulated facewise: sum_f m_f (du/h)^2.
double dirichlet_energy_identity(const EllipticOperator& op, const std::vector<double>& u);

} // namespace fraclab
