#include "fraclab/grid.hpp"
#include "fraclab/errors.hpp"

#include <cstdio>
#include <string>

namespace fraclab {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string Grid::describe() const {
    if (dim == 1)
        return "1D grid, extent " + fmt_double(extent[0]) + ", n=" + std::to_string(n[0]);
    return "2D grid, extents (" + fmt_double(extent[0]) + "," + fmt_double(extent[1]) +
           "), n=(" + std::to_string(n[0]) + "," + std::to_string(n[1]) + ")";
}

std::string Grid::to_json() const {
    std::string s = "{\n  \"dim\": " + std::to_string(dim) + ",\n  \"resolution\": [";
    s += std::to_string(n[0]);
    if (dim == 2) s += ", " + std::to_string(n[1]);
    s += "],\n  \"extents\": [" + fmt_double(extent[0]);
    if (dim == 2) s += ", " + fmt_double(extent[1]);
    s += "],\n  \"spacing\": [" + fmt_double(h[0]);
    if (dim == 2) s += ", " + fmt_double(h[1]);
    s += "],\n  \"cells\": " + std::to_string(cells);
    s += ",\n  \"faces\": " + std::to_string(faces.size());
    s += ",\n  \"boundary_faces\": " + std::to_string(boundary_face_count);
    s += ",\n  \"cell_volume\": " + fmt_double(cell_volume) + "\n}\n";
    return s;
}

Grid build_grid(int dim, const double* extents, const int* resolution) {
    if (dim != 1 && dim != 2)
        throw ConfigError("grid: dim must be 1 or 2, got " + std::to_string(dim));

    std::string violations;
    for (int a = 0; a < dim; ++a) {
        if (!(extents[a] > 0.0))
            violations += std::string(violations.empty() ? "" : "; ") +
                          "extent[" + std::to_string(a) + "] must be positive, got " +
                          fmt_double(extents[a]);
        if (resolution[a] < 3)
            violations += std::string(violations.empty() ? "" : "; ") +
                          "resolution[" + std::to_string(a) + "] must be >= 3, got " +
                          std::to_string(resolution[a]);
    }
    if (!violations.empty())
        throw ConfigError("grid: " + violations);

    Grid g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        g.n[a] = resolution[a];
        g.extent[a] = extents[a];
        g.h[a] = extents[a] / (resolution[a] + 1);
    }

    if (dim == 1) {
        const int n = g.n[0];
        const double h = g.h[0];
        g.cells = n;
        g.cell_volume = h;
        g.faces.reserve(n + 1);
        for (int i = 0; i <= n; ++i) {
            Face f;
            f.axis = 0;
            f.from = (i == 0) ? -1 : i - 1;
            f.to = (i == n) ? -1 : i;
            f.area = 1.0;
            f.cx = (i + 0.5) * h;
            if (f.boundary()) ++g.boundary_face_count;
            g.faces.push_back(f);
        }
        return g;
    }

    const int nx = g.n[0], ny = g.n[1];
    const double hx = g.h[0], hy = g.h[1];
    g.cells = nx * ny;
    g.cell_volume = hx * hy;

    // x-faces first: between nodes (i,j) and (i+1,j), i=0..nx, j=1..ny.
    const int xcount = (nx + 1) * ny;
    g.faces.reserve(xcount + (ny + 1) * nx);
    for (int j = 1; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            Face f;
            f.axis = 0;
            f.from = (i == 0) ? -1 : g.cell_id(i, j);
            f.to = (i == nx) ? -1 : g.cell_id(i + 1, j);
            f.area = hy;
            f.cx = (i + 0.5) * hx;
            f.cy = j * hy;
            if (f.boundary()) ++g.boundary_face_count;
            g.faces.push_back(f);
        }
    }
    // y-faces: between nodes (i,j) and (i,j+1), j=0..ny, i=1..nx.
    for (int i = 1; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) {
            Face f;
            f.axis = 1;
            f.from = (j == 0) ? -1 : g.cell_id(i, j);
            f.to = (j == ny) ? -1 : g.cell_id(i, j + 1);
            f.area = hx;
            f.cx = i * hx;
            f.cy = (j + 0.5) * hy;
            if (f.boundary()) ++g.boundary_face_count;
            g.faces.push_back(f);
        }
    }

    auto xface_id = [&](int i, int j) { // i=0..nx, j=1..ny
        return i + (nx + 1) * (j - 1);
    };
    auto yface_id = [&](int i, int j) { // i=1..nx, j=0..ny
        return xcount + j + (ny + 1) * (i - 1);
    };

    // Corners at ((i+1/2)hx, (j+1/2)hy), i=0..nx, j=0..ny.
    g.corners.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            Corner c;
            c.cx = (i + 0.5) * hx;
            c.cy = (j + 0.5) * hy;
            if (j >= 1) c.fx_lo = xface_id(i, j);
            if (j + 1 <= ny) c.fx_hi = xface_id(i, j + 1);
            if (i >= 1) c.fy_lo = yface_id(i, j);
            if (i + 1 <= nx) c.fy_hi = yface_id(i + 1, j);
            g.corners.push_back(c);
        }
    }
    return g;
}

Grid build_grid_1d(double extent, int n) {
    double e[2] = {extent, 0};
    int r[2] = {n, 0};
    return build_grid(1, e, r);
}

Grid build_grid_2d(double ex, double ey, int nx, int ny) {
    double e[2] = {ex, ey};
    int r[2] = {nx, ny};
    return build_grid(2, e, r);
}

} // namespace fraclab
