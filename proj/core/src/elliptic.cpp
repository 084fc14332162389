#include "fraclab/elliptic.hpp"
#include "fraclab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace fraclab {

void SparseSym::apply(const double* x, double* y) const {
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            acc += val[k] * x[col[k]];
        y[i] = acc;
    }
}

std::vector<double> SparseSym::apply(const std::vector<double>& x) const {
    std::vector<double> y(n);
    apply(x.data(), y.data());
    return y;
}

double SparseSym::entry(int i, int j) const {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        if (col[k] == j) return val[k];
    return 0.0;
}

std::string SparseSym::to_coo_text() const {
    std::string out;
    char buf[80];
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, col[k], val[k]);
            out += buf;
        }
    return out;
}

namespace {

double face_delta(const Face& f, const std::vector<double>& u) {
    double d = 0.0;
    if (f.to >= 0) d += u[f.to];
    if (f.from >= 0) d -= u[f.from];
    return d;
}

using RowMaps = std::vector<std::map<int, double>>;

void add_entry(RowMaps& rows, int i, int j, double v) {
    rows[i][j] += v;
}

// kappa * delta_f^2 contribution to the quadratic form matrix.
void scatter_square(RowMaps& rows, const Face& f, double kappa) {
    if (f.from >= 0) add_entry(rows, f.from, f.from, kappa);
    if (f.to >= 0) add_entry(rows, f.to, f.to, kappa);
    if (f.from >= 0 && f.to >= 0) {
        add_entry(rows, f.from, f.to, -kappa);
        add_entry(rows, f.to, f.from, -kappa);
    }
}

// kappa * delta_f * delta_g, symmetrized. Mirrored insertions keep the
// accumulated matrix symmetric bit for bit.
void scatter_product(RowMaps& rows, const Face& f, const Face& g, double kappa) {
    const int fi[2] = {f.to, f.from};
    const double fs[2] = {1.0, -1.0};
    const int gi[2] = {g.to, g.from};
    const double gs[2] = {1.0, -1.0};
    for (int a = 0; a < 2; ++a) {
        if (fi[a] < 0) continue;
        for (int b = 0; b < 2; ++b) {
            if (gi[b] < 0) continue;
            const double v = 0.5 * kappa * fs[a] * gs[b];
            add_entry(rows, fi[a], gi[b], v);
            add_entry(rows, gi[b], fi[a], v);
        }
    }
}

SparseSym rows_to_csr(const RowMaps& rows, double scale) {
    SparseSym m;
    m.n = static_cast<int>(rows.size());
    m.row_ptr.resize(m.n + 1, 0);
    std::size_t nnz = 0;
    for (const auto& r : rows) nnz += r.size();
    m.col.reserve(nnz);
    m.val.reserve(nnz);
    for (int i = 0; i < m.n; ++i) {
        for (const auto& [j, v] : rows[i]) {
            m.col.push_back(j);
            m.val.push_back(v * scale);
        }
        m.row_ptr[i + 1] = static_cast<int>(m.col.size());
    }
    return m;
}

} // namespace

void EllipticOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(u.size());
    KA.apply(u.data(), out.data());
}

std::vector<double> EllipticOperator::apply(const std::vector<double>& u) const {
    return KA.apply(u);
}

void EllipticOperator::apply_identity(const std::vector<double>& u,
                                      std::vector<double>& out) const {
    out.resize(u.size());
    KI.apply(u.data(), out.data());
}

double EllipticOperator::inner(const std::vector<double>& u,
                               const std::vector<double>& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i] * weights[i];
    return acc;
}

double EllipticOperator::norm(const std::vector<double>& u) const {
    return std::sqrt(inner(u, u));
}

double EllipticOperator::face_flux(const std::vector<double>& u, int f) const {
    const Face& face = grid.faces[f];
    const double delta = face_delta(face, u);
    if (grid.dim == 1)
        return coeff.a11[f] * delta / grid.h[0];

    const double hx = grid.h[0], hy = grid.h[1];
    double flux = 0.0;
    for (int side = 0; side < 2; ++side) {
        const int c = face_corners[f][side];
        if (c < 0) continue;
        const Corner& corner = grid.corners[c];
        if (face.axis == 0) {
            double sy = 0.0;
            if (corner.fy_lo >= 0) sy += face_delta(grid.faces[corner.fy_lo], u);
            if (corner.fy_hi >= 0) sy += face_delta(grid.faces[corner.fy_hi], u);
            flux += (hy / (2.0 * hx)) * ca11[c] * delta + 0.25 * ca12[c] * sy;
        } else {
            double sx = 0.0;
            if (corner.fx_lo >= 0) sx += face_delta(grid.faces[corner.fx_lo], u);
            if (corner.fx_hi >= 0) sx += face_delta(grid.faces[corner.fx_hi], u);
            flux += (hx / (2.0 * hy)) * ca22[c] * delta + 0.25 * ca12[c] * sx;
        }
    }
    return flux;
}

double EllipticOperator::face_flux_identity(const std::vector<double>& u, int f) const {
    const Face& face = grid.faces[f];
    return face_delta(face, u) * face.area / grid.h[face.axis];
}

double EllipticOperator::boundary_outflow(const std::vector<double>& u) const {
    double acc = 0.0;
    for (std::size_t f = 0; f < grid.faces.size(); ++f) {
        const Face& face = grid.faces[f];
        if (!face.boundary()) continue;
        const double t = face_flux(u, static_cast<int>(f));
        acc += (face.from < 0) ? t : -t;
    }
    return acc;
}

double EllipticOperator::gershgorin_max() const {
    double worst = 0.0;
    for (int i = 0; i < KA.n; ++i) {
        double radius = 0.0;
        double diag = 0.0;
        for (int k = KA.row_ptr[i]; k < KA.row_ptr[i + 1]; ++k) {
            if (KA.col[k] == i)
                diag = KA.val[k];
            else
                radius += std::fabs(KA.val[k]);
        }
        if (diag + radius > worst) worst = diag + radius;
    }
    return worst;
}

double EllipticOperator::identity_lambda1() const {
    double acc = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
        const double s = std::sin(M_PI * grid.h[a] / (2.0 * grid.extent[a]));
        acc += 4.0 / (grid.h[a] * grid.h[a]) * s * s;
    }
    return acc;
}

EllipticOperator assemble_elliptic(const Grid& grid, const CoefficientField& coeff) {
    EllipticOperator op;
    op.grid = grid;
    op.coeff = coeff;
    op.weights.assign(grid.cells, grid.cell_volume);

    RowMaps rows_a(grid.cells), rows_i(grid.cells);

    if (grid.dim == 1) {
        const double h = grid.h[0];
        for (std::size_t f = 0; f < grid.faces.size(); ++f) {
            scatter_square(rows_a, grid.faces[f], coeff.a11[f] / h);
            scatter_square(rows_i, grid.faces[f], 1.0 / h);
        }
        op.face_corners.assign(grid.faces.size(), {-1, -1});
    } else {
        const double hx = grid.h[0], hy = grid.h[1];
        const std::size_t nc = grid.corners.size();
        op.ca11.resize(nc);
        op.ca12.resize(nc);
        op.ca22.resize(nc);
        op.face_corners.assign(grid.faces.size(), {-1, -1});

        for (std::size_t c = 0; c < nc; ++c) {
            const Corner& corner = grid.corners[c];
            const int ids[4] = {corner.fx_lo, corner.fx_hi, corner.fy_lo, corner.fy_hi};
            double a11 = 0.0, a12 = 0.0, a22 = 0.0;
            int count = 0;
            for (int id : ids) {
                if (id < 0) continue;
                a11 += coeff.a11[id];
                a12 += coeff.a12[id];
                a22 += coeff.a22[id];
                ++count;
                auto& fc = op.face_corners[id];
                if (fc[0] < 0)
                    fc[0] = static_cast<int>(c);
                else
                    fc[1] = static_cast<int>(c);
            }
            if (count == 0) continue;
            a11 /= count;
            a12 /= count;
            a22 /= count;
            op.ca11[c] = a11;
            op.ca12[c] = a12;
            op.ca22[c] = a22;

            const double kx = 0.5 * hy / hx; // (hx hy / 2) / hx^2
            const double ky = 0.5 * hx / hy;
            const int xs[2] = {corner.fx_lo, corner.fx_hi};
            const int ys[2] = {corner.fy_lo, corner.fy_hi};
            for (int id : xs)
                if (id >= 0) {
                    scatter_square(rows_a, grid.faces[id], a11 * kx);
                    scatter_square(rows_i, grid.faces[id], kx);
                }
            for (int id : ys)
                if (id >= 0) {
                    scatter_square(rows_a, grid.faces[id], a22 * ky);
                    scatter_square(rows_i, grid.faces[id], ky);
                }
            if (a12 != 0.0) {
                for (int fx : xs) {
                    if (fx < 0) continue;
                    for (int fy : ys) {
                        if (fy < 0) continue;
                        scatter_product(rows_a, grid.faces[fx], grid.faces[fy], 0.5 * a12);
                    }
                }
            }
        }
    }

    // The quadratic form B satisfies u'Bu ~ int A grad u . grad u; the
    // operator matrix is B scaled by the inverse cell measure.
    op.KA = rows_to_csr(rows_a, 1.0 / grid.cell_volume);
    op.KI = rows_to_csr(rows_i, 1.0 / grid.cell_volume);
    return op;
}

double dirichlet_energy(const EllipticOperator& op, const std::vector<double>& u) {
    const Grid& grid = op.grid;
    if (grid.dim == 1) {
        double acc = 0.0;
        for (std::size_t f = 0; f < grid.faces.size(); ++f) {
            const double d = face_delta(grid.faces[f], u);
            acc += op.coeff.a11[f] * d * d / grid.h[0];
        }
        return acc;
    }
    const double hx = grid.h[0], hy = grid.h[1];
    double acc = 0.0;
    for (std::size_t c = 0; c < grid.corners.size(); ++c) {
        const Corner& corner = grid.corners[c];
        double dx2 = 0.0, dy2 = 0.0, sx = 0.0, sy = 0.0;
        if (corner.fx_lo >= 0) {
            const double d = face_delta(grid.faces[corner.fx_lo], u);
            dx2 += d * d;
            sx += d;
        }
        if (corner.fx_hi >= 0) {
            const double d = face_delta(grid.faces[corner.fx_hi], u);
            dx2 += d * d;
            sx += d;
        }
        if (corner.fy_lo >= 0) {
            const double d = face_delta(grid.faces[corner.fy_lo], u);
            dy2 += d * d;
            sy += d;
        }
        if (corner.fy_hi >= 0) {
            const double d = face_delta(grid.faces[corner.fy_hi], u);
            dy2 += d * d;
            sy += d;
        }
        acc += 0.5 * hy / hx * op.ca11[c] * dx2 + 0.5 * hx / hy * op.ca22[c] * dy2 +
               0.5 * op.ca12[c] * sx * sy;
    }
    return acc;
}

double dirichlet_energy_identity(const EllipticOperator& op, const std::vector<double>& u) {
    const Grid& grid = op.grid;
    double acc = 0.0;
    for (std::size_t f = 0; f < grid.faces.size(); ++f) {
        const Face& face = grid.faces[f];
        const double g = face_delta(face, u) / grid.h[face.axis];
        acc += g * g * grid.face_measure(face);
    }
    return acc;
}

} // namespace fraclab
