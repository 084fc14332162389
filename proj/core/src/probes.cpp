#include "fraclab/probes.hpp"

#include "fraclab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab {

double bump_value(double xi) {
    const double r2 = xi * xi;
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

double bump_slope(double xi) {
    const double r2 = xi * xi;
    if (r2 >= 1.0) return 0.0;
    const double d = 1.0 - r2;
    return bump_value(xi) * (-2.0 * xi) / (d * d);
}

double BumpFactor::value(double c) const {
    if (!active) return 1.0;
    return bump_value((c - center) / halfwidth);
}

double BumpFactor::slope(double c) const {
    if (!active) return 0.0;
    return bump_slope((c - center) / halfwidth) / halfwidth;
}

double SpaceTimeTest::value(double t, double px, double py) const {
    return time.value(t) * x.value(px) * y.value(py);
}

double SpaceTimeTest::time_slope(double t, double px, double py) const {
    return time.slope(t) * x.value(px) * y.value(py);
}

double SpaceTimeTest::grad_x(double t, double px, double py) const {
    return time.value(t) * x.slope(px) * y.value(py);
}

double SpaceTimeTest::grad_y(double t, double px, double py) const {
    return time.value(t) * x.value(px) * y.slope(py);
}

double SpatialWeight::value(double px, double py) const {
    switch (kind) {
    case Kind::One:
        return 1.0;
    case Kind::Box: {
        bool inside = px >= lo[0] && px <= hi[0];
        if (dim == 2) inside = inside && py >= lo[1] && py <= hi[1];
        return inside ? 1.0 : 0.0;
    }
    case Kind::Bump: {
        double v = bump_value((px - center[0]) / halfwidth[0]);
        if (dim == 2) v *= bump_value((py - center[1]) / halfwidth[1]);
        return v;
    }
    }
    return 0.0;
}

std::vector<SpaceTimeTest> builtin_flux_weights(const Grid& grid,
                                                double t_end) {
    const double T = t_end;
    const double X = grid.extent[0];
    const double Y = grid.extent[1];
    auto cover = [](double c, double w) { return BumpFactor{true, c, w}; };

    SpaceTimeTest early{"gamma_early", {true, 0.30 * T, 0.25 * T},
                        cover(0.5 * X, 1.2 * X), {}};
    SpaceTimeTest mid{"gamma_mid", {true, 0.50 * T, 0.40 * T},
                      cover(0.5 * X, 1.5 * X), {}};
    SpaceTimeTest late{"gamma_late", {true, 0.70 * T, 0.25 * T},
                       cover(0.5 * X, 2.0 * X), {}};
    if (grid.dim == 2) {
        early.y = cover(0.5 * Y, 1.2 * Y);
        mid.y = cover(0.5 * Y, 1.5 * Y);
        late.y = cover(0.5 * Y, 2.0 * Y);
    }
    return {early, mid, late};
}

std::vector<SpaceTimeTest> builtin_weak_tests(const Grid& grid,
                                              double t_end) {
    const double T = t_end;
    const double X = grid.extent[0];
    const double Y = grid.extent[1];

    SpaceTimeTest centered{"phi_centered", {true, 0.0, 0.90 * T},
                           {true, 0.50 * X, 0.40 * X}, {}};
    SpaceTimeTest offset{"phi_offset", {true, 0.20 * T, 0.60 * T},
                         {true, 0.35 * X, 0.30 * X}, {}};
    SpaceTimeTest broad{"phi_broad", {true, 0.0, 0.95 * T},
                        {true, 0.50 * X, 0.49 * X}, {}};
    if (grid.dim == 2) {
        centered.y = {true, 0.50 * Y, 0.40 * Y};
        offset.y = {true, 0.60 * Y, 0.30 * Y};
        broad.y = {true, 0.50 * Y, 0.49 * Y};
    }
    return {centered, offset, broad};
}

std::vector<SpatialWeight> builtin_trace_weights(const Grid& grid) {
    const double X = grid.extent[0];
    const double Y = grid.extent[1];

    SpatialWeight bump;
    bump.name = "zeta_bump";
    bump.kind = SpatialWeight::Kind::Bump;
    bump.dim = grid.dim;
    bump.center[0] = 0.5 * X;
    bump.center[1] = 0.5 * Y;
    bump.halfwidth[0] = 0.35 * X;
    bump.halfwidth[1] = 0.35 * Y;

    SpatialWeight box;
    box.name = "zeta_box";
    box.kind = SpatialWeight::Kind::Box;
    box.dim = grid.dim;
    box.lo[0] = 0.25 * X;
    box.hi[0] = 0.75 * X;
    box.lo[1] = 0.25 * Y;
    box.hi[1] = 0.75 * Y;

    SpatialWeight one;
    one.name = "zeta_one";
    one.kind = SpatialWeight::Kind::One;
    one.dim = grid.dim;

    return {bump, box, one};
}

FluxSampler::FluxSampler(const EllipticOperator& op,
                         const std::vector<double>& p)
    : grid_(&op.grid) {
    const Grid& g = op.grid;
    for (int a = 0; a < g.dim; ++a) {
        cols_[a] = g.n[a] + 1;
        rows_[a] = (g.dim == 2) ? g.n[1 - a] + 2 : 1;
        lattice_[a].assign(static_cast<std::size_t>(cols_[a]) * rows_[a], 0.0);
    }
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        const Face& face = g.faces[f];
        const int a = face.axis;
        const double cn = (a == 0) ? face.cx : face.cy;
        const int in = static_cast<int>(std::lround(cn / g.h[a] - 0.5));
        int it = 0;
        if (g.dim == 2) {
            const double ct = (a == 0) ? face.cy : face.cx;
            it = static_cast<int>(std::lround(ct / g.h[1 - a]));
        }
        lattice_[a][static_cast<std::size_t>(in) +
                    static_cast<std::size_t>(it) * cols_[a]] =
            op.face_flux(p, static_cast<int>(f)) / face.area;
    }
}

double FluxSampler::component(int axis, double px, double py) const {
    const Grid& g = *grid_;
    if (axis >= g.dim) return 0.0;

    const double pn = (axis == 0) ? px : py;
    double un = pn / g.h[axis] - 0.5;
    un = std::clamp(un, 0.0, static_cast<double>(cols_[axis] - 1));
    const int i0 = std::min(static_cast<int>(un), cols_[axis] - 2);
    const double fi = un - i0;

    const std::vector<double>& lat = lattice_[axis];
    const int c = cols_[axis];
    if (g.dim == 1)
        return lat[static_cast<std::size_t>(i0)] * (1.0 - fi) +
               lat[static_cast<std::size_t>(i0) + 1] * fi;

    const double pt = (axis == 0) ? py : px;
    double ut = pt / g.h[1 - axis];
    ut = std::clamp(ut, 0.0, static_cast<double>(rows_[axis] - 1));
    const int j0 = std::min(static_cast<int>(ut), rows_[axis] - 2);
    const double fj = ut - j0;

    const std::size_t base = static_cast<std::size_t>(i0) +
                             static_cast<std::size_t>(j0) * c;
    const double lo = lat[base] * (1.0 - fi) + lat[base + 1] * fi;
    const double hi = lat[base + c] * (1.0 - fi) + lat[base + c + 1] * fi;
    return lo * (1.0 - fj) + hi * fj;
}

double sample_cell_field(const Grid& grid, const std::vector<double>& u,
                         double px, double py) {
    const auto node_value = [&](int i, int j) -> double {
        if (i < 1 || i > grid.n[0]) return 0.0;
        if (grid.dim == 2 && (j < 1 || j > grid.n[1])) return 0.0;
        return u[static_cast<std::size_t>(grid.cell_id(i, grid.dim == 2 ? j : 1))];
    };
    const auto locate = [&](int a, double p, int& i0, double& f) {
        const double s =
            std::clamp(p / grid.h[a], 0.0, static_cast<double>(grid.n[a] + 1));
        i0 = std::min(static_cast<int>(s), grid.n[a]);
        f = s - i0;
    };

    int i0 = 0;
    double fx = 0.0;
    locate(0, px, i0, fx);
    if (grid.dim == 1)
        return node_value(i0, 1) * (1.0 - fx) + node_value(i0 + 1, 1) * fx;

    int j0 = 0;
    double fy = 0.0;
    locate(1, py, j0, fy);
    const double lo =
        node_value(i0, j0) * (1.0 - fx) + node_value(i0 + 1, j0) * fx;
    const double hi =
        node_value(i0, j0 + 1) * (1.0 - fx) + node_value(i0 + 1, j0 + 1) * fx;
    return lo * (1.0 - fy) + hi * fy;
}

namespace {

bool time_factor_vanishes(const SpaceTimeTest& test, double t) {
    return test.time.active &&
           std::abs(t - test.time.center) >= test.time.halfwidth;
}

double trapezoid(const std::vector<double>& times,
                 const std::vector<double>& values) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        acc += 0.5 * (times[k + 1] - times[k]) * (values[k] + values[k + 1]);
    return acc;
}

} // namespace

double shell_flux(const Trajectory& traj, const DegenerateSolver& solver,
                  const Deformation& def, double tau,
                  const SpaceTimeTest& gamma) {
    const Shell& shell = def.shell_for(tau);
    const EllipticOperator& op = solver.op();
    const Grid& g = op.grid;
    const int records = traj.records();
    if (records == 0) return 0.0;

    std::vector<double> integrand(static_cast<std::size_t>(records), 0.0);
    for (int k = 0; k < records; ++k) {
        const double t = traj.times[static_cast<std::size_t>(k)];
        if (time_factor_vanishes(gamma, t)) continue;
        const std::vector<double>& u = traj.states[static_cast<std::size_t>(k)];
        const FluxSampler flux(op, solver.pressure(u));
        double acc = 0.0;
        for (const ShellNode& nd : shell.nodes) {
            const double uval = sample_cell_field(g, u, nd.x, nd.y);
            const double normal_flux = flux.component(0, nd.x, nd.y) * nd.nx +
                                       flux.component(1, nd.x, nd.y) * nd.ny;
            const double pullback =
                gamma.value(t, nd.x + shell.offset * nd.nx,
                            nd.y + shell.offset * nd.ny);
            acc += uval * normal_flux * pullback * nd.weight;
        }
        integrand[static_cast<std::size_t>(k)] = acc;
    }
    return trapezoid(traj.times, integrand);
}

double weak_residual(const Trajectory& traj, const DegenerateSolver& solver,
                     const SpaceTimeTest& phi) {
    const EllipticOperator& op = solver.op();
    const Grid& g = op.grid;
    const int records = traj.records();
    if (records == 0) return 0.0;

    std::vector<double> integrand(static_cast<std::size_t>(records), 0.0);
    for (int k = 0; k < records; ++k) {
        const double t = traj.times[static_cast<std::size_t>(k)];
        if (time_factor_vanishes(phi, t)) continue;
        const std::vector<double>& u = traj.states[static_cast<std::size_t>(k)];
        const FluxSampler flux(op, solver.pressure(u));
        double acc = 0.0;
        for (int i = 0; i < g.cells; ++i) {
            const double px = g.node_x(i);
            const double py = g.node_y(i);
            double dot = flux.component(0, px, py) * phi.grad_x(t, px, py);
            if (g.dim == 2)
                dot += flux.component(1, px, py) * phi.grad_y(t, px, py);
            acc += u[static_cast<std::size_t>(i)] *
                   (phi.time_slope(t, px, py) - dot);
        }
        integrand[static_cast<std::size_t>(k)] = acc * g.cell_volume;
    }
    const double interior = trapezoid(traj.times, integrand);

    const std::vector<double>& u0 = traj.initial();
    const double t0 = traj.times.front();
    double initial = 0.0;
    for (int i = 0; i < g.cells; ++i)
        initial += u0[static_cast<std::size_t>(i)] *
                   phi.value(t0, g.node_x(i), g.node_y(i));
    return interior + initial * g.cell_volume;
}

std::vector<double> initial_trace_check(const Trajectory& traj,
                                        const EllipticOperator& op,
                                        const SpatialWeight& zeta,
                                        const std::vector<double>& t_list) {
    const Grid& g = op.grid;
    if (traj.records() == 0)
        throw ConfigError("initial trace probe requires a recorded trajectory");
    const std::vector<double>& u0 = traj.initial();

    std::vector<double> out;
    out.reserve(t_list.size());
    for (double t : t_list) {
        const std::vector<double> ut = traj.interpolate(t);
        double acc = 0.0;
        for (int i = 0; i < g.cells; ++i)
            acc += (ut[static_cast<std::size_t>(i)] -
                    u0[static_cast<std::size_t>(i)]) *
                   zeta.value(g.node_x(i), g.node_y(i));
        out.push_back(std::abs(acc) * g.cell_volume);
    }
    return out;
}

} // namespace fraclab
